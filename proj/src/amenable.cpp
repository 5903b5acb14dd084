#include "recur/amenable.hpp"

#include <algorithm>
#include <cmath>

#include "recur/covering.hpp"

namespace recur {

namespace {

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// #{x in [lo, hi) : x == r (mod m)}
i64 coset_count(i64 lo, i64 hi, i64 r, i64 m) {
    if (hi <= lo) return 0;
    return floor_div(hi - r - 1, m) - floor_div(lo - r - 1, m);
}

i64 count_in_sorted(const std::vector<i64>& v, i64 lo, i64 hi) {
    const auto a = std::lower_bound(v.begin(), v.end(), lo);
    const auto b = std::lower_bound(v.begin(), v.end(), hi);
    return static_cast<i64>(b - a);
}

}  // namespace

i64 FolnerBox::volume() const {
    i64 v = 1;
    for (i64 s : sides) {
        if (s < 1) throw config_error("FolnerBox: sides must be positive");
        v *= s;
    }
    return v;
}

bool FolnerBox::contains_box(const FolnerBox& inner) const {
    if (inner.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const auto s = static_cast<std::size_t>(i);
        if (inner.corner[s] < corner[s] || inner.corner[s] + inner.sides[s] > corner[s] + sides[s])
            return false;
    }
    return true;
}

FolnerBox FolnerBox::cube(int d, i64 side, i64 corner_value) {
    FolnerBox b;
    b.corner.assign(static_cast<std::size_t>(d), corner_value);
    b.sides.assign(static_cast<std::size_t>(d), side);
    return b;
}

Rational folner_defect(const FolnerBox& box, const std::vector<i64>& t) {
    if (static_cast<int>(t.size()) != box.dim())
        throw config_error("folner_defect: dimension mismatch");
    const i64 volume = box.volume();
    i64 overlap = 1;
    for (int i = 0; i < box.dim(); ++i) {
        const i64 shift = t[static_cast<std::size_t>(i)];
        const i64 side = box.sides[static_cast<std::size_t>(i)];
        const i64 keep = side - (shift < 0 ? -shift : shift);
        overlap *= keep > 0 ? keep : 0;
    }
    // |tF \ F| and |F \ tF| both equal volume - overlap
    return Rational::make(2 * (volume - overlap), volume);
}

CoreDoublingResult core_doubling_check(const FolnerBox& box, const std::vector<std::vector<i64>>& shifts) {
    if (shifts.empty()) throw config_error("core_doubling_check: empty shift set");
    CoreDoublingResult r;
    r.volume = box.volume();
    i64 inter = 1;
    for (int i = 0; i < box.dim(); ++i) {
        i64 lo = shifts[0][static_cast<std::size_t>(i)];
        i64 hi = lo;
        for (const auto& h : shifts) {
            lo = std::min(lo, h[static_cast<std::size_t>(i)]);
            hi = std::max(hi, h[static_cast<std::size_t>(i)]);
        }
        const i64 side = box.sides[static_cast<std::size_t>(i)] - (hi - lo);
        inter *= side > 0 ? side : 0;
    }
    r.intersection = inter;
    if (inter == 0) {
        r.empty_intersection = true;
        r.ok = false;
        return r;
    }
    r.ratio = Rational::make(r.volume, inter);
    r.ok = r.volume <= 2 * inter;
    return r;
}

i64 core_doubling_threshold(const std::vector<i64>& spreads) {
    i64 max_spread = 0, spread_sum = 0;
    for (i64 s : spreads) {
        if (s < 0) throw config_error("core_doubling_threshold: negative spread");
        max_spread = std::max(max_spread, s);
        spread_sum += s;
    }
    // n >= 2 * sum(spreads) always passes, so the scan terminates there
    const i64 cap = std::max(max_spread + 1, 2 * spread_sum + 1);
    if (static_cast<double>(spreads.size()) * std::log2(static_cast<double>(cap) + 1.0) >= 120.0)
        throw config_error("core_doubling_threshold: product would overflow");
    for (i64 n = max_spread + 1; n <= cap; ++n) {
        __int128 lhs = 1, rhs = 2;
        for (i64 s : spreads) {
            lhs *= n;
            rhs *= n - s;
        }
        if (lhs <= rhs) return n;
    }
    return cap;
}

// ---------------------------------------------------------------------------
// SetOracle
// ---------------------------------------------------------------------------

SetOracle SetOracle::coset(std::vector<i64> moduli, std::vector<i64> residues) {
    if (moduli.empty() || moduli.size() != residues.size())
        throw config_error("SetOracle::coset: moduli/residues mismatch");
    SetOracle o;
    o.kind_ = Kind::coset;
    o.dim_ = static_cast<int>(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (moduli[i] < 1) throw config_error("SetOracle::coset: modulus must be >= 1");
        residues[i] = ((residues[i] % moduli[i]) + moduli[i]) % moduli[i];
    }
    o.moduli_ = std::move(moduli);
    o.residues_ = std::move(residues);
    return o;
}

SetOracle SetOracle::explicit_1d(std::vector<i64> sorted_times) {
    SetOracle o;
    o.kind_ = Kind::explicit1d;
    o.dim_ = 1;
    o.times_.push_back(std::move(sorted_times));
    return o;
}

SetOracle SetOracle::product(std::vector<std::vector<i64>> per_dim_sorted) {
    if (per_dim_sorted.empty()) throw config_error("SetOracle::product: empty");
    SetOracle o;
    o.kind_ = Kind::product;
    o.dim_ = static_cast<int>(per_dim_sorted.size());
    o.times_ = std::move(per_dim_sorted);
    return o;
}

bool SetOracle::contains(const std::vector<i64>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw config_error("SetOracle: dimension mismatch");
    switch (kind_) {
        case Kind::coset:
            for (int i = 0; i < dim_; ++i) {
                const auto s = static_cast<std::size_t>(i);
                if (((x[s] - residues_[s]) % moduli_[s] + moduli_[s]) % moduli_[s] != 0) return false;
            }
            return true;
        case Kind::explicit1d:
        case Kind::product:
            for (int i = 0; i < dim_; ++i) {
                const auto s = static_cast<std::size_t>(i);
                if (!std::binary_search(times_[s].begin(), times_[s].end(), x[s])) return false;
            }
            return true;
    }
    return false;
}

i64 SetOracle::count_in(const FolnerBox& box) const {
    if (box.dim() != dim_) throw config_error("SetOracle: dimension mismatch");
    i64 count = 1;
    for (int i = 0; i < dim_; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const i64 lo = box.corner[s];
        const i64 hi = box.corner[s] + box.sides[s];
        const i64 c = kind_ == Kind::coset ? coset_count(lo, hi, residues_[s], moduli_[s])
                                           : count_in_sorted(times_[s], lo, hi);
        count *= c;
        if (count == 0) return 0;
    }
    return count;
}

std::string SetOracle::describe() const {
    switch (kind_) {
        case Kind::coset: {
            std::string s = "coset(";
            for (int i = 0; i < dim_; ++i) {
                if (i) s += ",";
                s += std::to_string(residues_[static_cast<std::size_t>(i)]) + " mod " +
                     std::to_string(moduli_[static_cast<std::size_t>(i)]);
            }
            return s + ")";
        }
        case Kind::explicit1d:
            return "explicit(" + std::to_string(times_[0].size()) + " times)";
        case Kind::product:
            return "product(" + std::to_string(dim_) + " dims)";
    }
    return "?";
}

i64 SetOracle::max_gap_in(int dim, i64 lo, i64 hi, i64* corner_out) const {
    const auto s = static_cast<std::size_t>(dim);
    if (kind_ == Kind::coset) {
        if (corner_out) *corner_out = residues_[s] + 1;
        return moduli_[s] - 1;
    }
    const auto& v = times_[s];
    i64 prev = lo - 1;
    i64 best = 0, best_corner = lo;
    const auto a = std::lower_bound(v.begin(), v.end(), lo);
    const auto b = std::lower_bound(v.begin(), v.end(), hi);
    for (auto it = a; it != b; ++it) {
        if (*it - prev - 1 > best) {
            best = *it - prev - 1;
            best_corner = prev + 1;
        }
        prev = *it;
    }
    if (hi - prev - 1 > best) {
        best = hi - prev - 1;
        best_corner = prev + 1;
    }
    if (corner_out) *corner_out = best_corner;
    return best;
}

bool verify_syndetic(const SetOracle& B, const SyndeticWitness& witness) {
    const int d = witness.region.dim();
    if (B.dim() != d) throw config_error("verify_syndetic: dimension mismatch");
    const i64 volume = witness.region.volume();
    if (volume > 20'000'000 / std::max<i64>(1, static_cast<i64>(witness.K.size())))
        throw config_error("verify_syndetic: region too large for exhaustive check");
    std::vector<i64> t = witness.region.corner;
    std::vector<i64> probe(static_cast<std::size_t>(d));
    for (i64 idx = 0; idx < volume; ++idx) {
        bool hit = false;
        for (const auto& k : witness.K) {
            for (int i = 0; i < d; ++i)
                probe[static_cast<std::size_t>(i)] =
                    k[static_cast<std::size_t>(i)] + t[static_cast<std::size_t>(i)];
            if (B.contains(probe)) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
        // advance odometer
        for (int i = 0; i < d; ++i) {
            const auto s = static_cast<std::size_t>(i);
            if (++t[s] < witness.region.corner[s] + witness.region.sides[s]) break;
            t[s] = witness.region.corner[s];
        }
    }
    return true;
}

SyndeticDensityReport syndetic_box_density(const SetOracle& B, const SyndeticWitness& witness,
                              const std::vector<FolnerBox>& boxes) {
    for (const auto& box : boxes)
        if (!witness.region.contains_box(box))
            throw config_error("syndetic_box_density: witness region does not contain all boxes");
    if (!verify_syndetic(B, witness))
        throw config_error("syndetic_box_density: syndetic witness fails on the region");

    SyndeticDensityReport rep;
    rep.bound = Rational::make(1, 2 * static_cast<i64>(witness.K.size()));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        rep.frequencies.push_back(Rational::make(B.count_in(boxes[i]), boxes[i].volume()));
        if (rep.threshold_index < 0 && core_doubling_check(boxes[i], witness.K).ok)
            rep.threshold_index = static_cast<i64>(i);
    }
    rep.ok = rep.threshold_index >= 0;
    if (rep.threshold_index >= 0) {
        for (std::size_t i = static_cast<std::size_t>(rep.threshold_index); i < boxes.size(); ++i) {
            if (rep.frequencies[i] < rep.bound) {
                rep.ok = false;
                rep.violations.push_back("box " + std::to_string(i) + ": frequency " +
                                         rep.frequencies[i].str() + " < " + rep.bound.str());
            }
        }
    }
    return rep;
}

DensityReport amenable_uniform_bound(const TorusZdAction& action, const Entourage& eps,
                                     const AmenableBoundOptions& opt) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("amenable_uniform_bound: entourage must be a metric ball");
    if (!action.axis_aligned())
        throw covering_error("amenable_uniform_bound: action is not an axis-aligned product of "
                             "rotations; covering box search is only implemented for products");
    const int d = action.d;
    if (static_cast<int>(opt.box_sides.size()) != d || static_cast<int>(opt.horizon.size()) != d)
        throw config_error("amenable_uniform_bound: box_sides/horizon dimension mismatch");

    const double cover_radius = opt.cover_radius > 0.0 ? opt.cover_radius : eps.radius;
    if (cover_radius > eps.radius)
        throw config_error("amenable_uniform_bound: covering radius exceeds epsilon");

    // per-axis covering constants; the exponent box is their product
    std::vector<CoveringCertificate> axis_certs;
    i64 k_cardinality = 1;
    for (int j = 0; j < d; ++j) {
        RotationSystem rot;
        rot.alpha = action.generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        rot.alpha_error = action.generator_error[static_cast<std::size_t>(j)];
        rot.name = action.name + "/axis" + std::to_string(j);
        axis_certs.push_back(rotation_covering_K(rot, Entourage::ball(cover_radius), opt.k_max));
        k_cardinality *= axis_certs.back().covering_k + 1;
    }
    const Rational bound = Rational::make(1, 2 * k_cardinality);

    // per-axis visit sets and sliding-window minimum counts
    std::vector<i64> min_counts(static_cast<std::size_t>(d));
    std::vector<i64> argmins(static_cast<std::size_t>(d));
    i64 max_gap_1d = -1;
    for (int j = 0; j < d; ++j) {
        const auto s = static_cast<std::size_t>(j);
        RotationSystem rot;
        rot.alpha = action.generators[s][s];
        rot.alpha_error = action.generator_error[s];
        rot.name = action.name + "/axis" + std::to_string(j);
        const auto profile = return_set(rot, CirclePoint{0}, CirclePoint{0}, eps,
                                        Window{0, opt.horizon[s]});
        const auto est = banach_lower_density(profile, opt.box_sides[s], opt.horizon[s]);
        min_counts[s] = est.min_count;
        argmins[s] = est.argmin.begin;
        if (d == 1) max_gap_1d = profile.max_gap;
    }

    i64 count_product = 1, volume = 1;
    for (int j = 0; j < d; ++j) {
        count_product *= min_counts[static_cast<std::size_t>(j)];
        volume *= opt.box_sides[static_cast<std::size_t>(j)];
    }
    const Rational min_freq = Rational::make(count_product, volume);

    DensityReport rep;
    rep.system = action.name;
    rep.epsilon = eps.str();
    rep.window_length = volume;
    rep.horizon = opt.horizon[0];
    rep.certificate = axis_certs[0].summary();
    rep.certificate.system = action.name + " (|K|=" + std::to_string(k_cardinality) + ")";
    rep.certified_bound = bound;
    rep.certified_bound_value = bound.value();
    rep.window_slack = 0.0;

    const int grid = std::max(1, opt.grid_points);
    rep.rows.resize(static_cast<std::size_t>(grid));
    for (int g = 0; g < grid; ++g) {
        DensityRow row;
        row.system = action.name;
        const u64 ticks = static_cast<u64>((static_cast<u128>(g) << 64) / static_cast<u128>(grid));
        row.point = "diag(" + ticks_to_string(ticks) + ")";
        row.epsilon = eps.str();
        row.window_begin = 0;
        row.window_end = opt.horizon[0];
        row.count = static_cast<double>(count_product);
        row.max_gap = max_gap_1d;
        row.frequency = min_freq;  // translation actions: visits are base-point free
        row.frequency_value = min_freq.value();
        row.argmin_start = argmins[0];
        row.margin = (min_freq - bound).value();
        rep.rows[static_cast<std::size_t>(g)] = std::move(row);
    }
    rep.min_measured = min_freq.value();
    rep.margin = (min_freq - bound).value();
    if (min_freq < bound)
        rep.violations.push_back("minimum box frequency " + min_freq.str() + " < bound " +
                                 bound.str());
    return rep;
}

ApVerdict ap_characterization(const SetOracle& B, const FolnerBox& region,
                              const std::vector<i64>& ladder_sizes) {
    const int d = region.dim();
    ApVerdict v;
    i64 overall_gap = 0;
    for (int j = 0; j < d; ++j) {
        const auto s = static_cast<std::size_t>(j);
        overall_gap = std::max(overall_gap,
                               B.max_gap_in(j, region.corner[s], region.corner[s] + region.sides[s]));
    }
    bool all_sizes_avoid = true;
    for (i64 size : ladder_sizes) {
        for (int j = 0; j < d; ++j) {
            const auto s = static_cast<std::size_t>(j);
            if (size > region.sides[s])
                throw config_error("ap_characterization: ladder size exceeds region");
        }
        ApLadderEntry entry;
        entry.size = size;
        // a translated box avoids the product set iff some axis has an
        // empty stretch of this length
        for (int j = 0; j < d && !entry.empty_box_found; ++j) {
            const auto s = static_cast<std::size_t>(j);
            i64 corner = 0;
            const i64 gap = B.max_gap_in(j, region.corner[s], region.corner[s] + region.sides[s],
                                         &corner);
            if (gap >= size) {
                entry.empty_box_found = true;
                entry.witness_corner.assign(static_cast<std::size_t>(d), 0);
                for (int jj = 0; jj < d; ++jj)
                    entry.witness_corner[static_cast<std::size_t>(jj)] =
                        region.corner[static_cast<std::size_t>(jj)];
                entry.witness_corner[s] = corner;
            }
        }
        all_sizes_avoid = all_sizes_avoid && entry.empty_box_found;
        v.ladder.push_back(std::move(entry));
    }
    v.ap_consistent = !all_sizes_avoid;
    v.max_gap = overall_gap;
    return v;
}

}  // namespace recur
