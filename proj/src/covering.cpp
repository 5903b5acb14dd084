#include "recur/covering.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "recur/parallel.hpp"

namespace recur {

namespace {

constexpr u128 kFullCircle = static_cast<u128>(1) << 64;

std::string rotation_descriptor(const RotationSystem& sys) {
    return "rotation|alpha=" + std::to_string(sys.alpha.frac) +
           "|err=" + std::to_string(sys.alpha_error);
}

std::string subshift_descriptor(const SubstitutionSystem& sys) {
    return "subshift|" + sys.alphabet() + "|" + sys.name();
}

// Incrementally maintained circular point set with its largest arc.
class GapTracker {
  public:
    // returns false when the point was already present (orbit closed)
    bool insert(u64 v) {
        auto [it, fresh] = points_.insert(v);
        if (!fresh) return false;
        if (points_.size() == 1) return true;
        auto nxt = std::next(it);
        if (nxt == points_.end()) nxt = points_.begin();
        auto prv = it == points_.begin() ? std::prev(points_.end()) : std::prev(it);
        if (points_.size() == 2) {
            gaps_.insert(*nxt - v);
            gaps_.insert(v - *nxt);
        } else {
            gaps_.erase(gaps_.find(*nxt - *prv));
            gaps_.insert(v - *prv);
            gaps_.insert(*nxt - v);
        }
        return true;
    }

    u128 max_gap() const {
        if (points_.size() <= 1) return kFullCircle;
        return static_cast<u128>(*gaps_.rbegin());
    }

    std::vector<u64> sorted_points() const { return {points_.begin(), points_.end()}; }

  private:
    std::set<u64> points_;
    std::multiset<u64> gaps_;
};

}  // namespace

std::uint64_t CoveringCertificate::evidence_digest() const {
    std::string bytes;
    if (const auto* r = std::get_if<RotationCoveringEvidence>(&evidence)) {
        bytes.append(reinterpret_cast<const char*>(r->orbit_sorted.data()),
                     r->orbit_sorted.size() * sizeof(u64));
        bytes += std::to_string(r->max_gap_ticks);
    } else if (const auto* s = std::get_if<SubshiftCoveringEvidence>(&evidence)) {
        for (const auto& w : s->cylinder_words) bytes += w + "|";
        bytes += s->witness_word_prev + "|" + s->witness_missing_word;
    } else if (const auto* t = std::get_if<TorusCoveringEvidence>(&evidence)) {
        bytes = std::to_string(t->grid_resolution) + "|" + std::to_string(t->worst_min_distance);
    }
    return fnv1a64(bytes);
}

CertificateSummary CoveringCertificate::summary() const {
    CertificateSummary s;
    s.system = system;
    s.system_hash = system_hash;
    s.epsilon = epsilon.str();
    s.covering_k = covering_k;
    s.evidence_digest = evidence_digest();
    s.slack = slack;
    return s;
}

CoveringCertificate rotation_covering_K(const RotationSystem& sys, const Entourage& eps,
                                        i64 k_max) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("rotation_covering_K: entourage must be a metric ball");
    const u128 two_r = 2 * static_cast<u128>(eps.radius_ticks);
    GapTracker tracker;
    u128 prev_max = kFullCircle;
    for (i64 k = 0; k <= k_max; ++k) {
        require_budget(sys.name + " covering", static_cast<double>(k) * sys.per_step_error(),
                       eps.radius);
        if (!tracker.insert(sys.alpha.frac * static_cast<u64>(k))) {
            // periodic orbit; the gap structure is final
            throw covering_error(sys.name + ": orbit closed after " + std::to_string(k) +
                                 " points, not minimal at this epsilon (max gap " +
                                 ticks_to_string(static_cast<u64>(tracker.max_gap())) + ")");
        }
        const u128 cur_max = tracker.max_gap();
        if (cur_max < two_r) {
            CoveringCertificate cert;
            cert.system = sys.name;
            cert.system_hash = fnv1a64(rotation_descriptor(sys));
            cert.epsilon = eps;
            cert.covering_k = k;
            cert.slack = eps.radius - unit_from_ticks(static_cast<u64>(cur_max)) / 2.0 -
                         static_cast<double>(k) * sys.per_step_error();
            RotationCoveringEvidence ev;
            ev.orbit_sorted = tracker.sorted_points();
            ev.max_gap_ticks = static_cast<u64>(cur_max);
            ev.witness_gap_prev =
                k == 0 ? 0
                       : (prev_max >= kFullCircle ? ~static_cast<u64>(0)
                                                  : static_cast<u64>(prev_max));
            cert.evidence = std::move(ev);
            return cert;
        }
        prev_max = cur_max;
    }
    throw covering_error(sys.name + ": no covering constant up to K_max=" + std::to_string(k_max) +
                         " at " + eps.str());
}

CoveringCertificate subshift_covering_K(const SubstitutionSystem& sys, const Entourage& eps,
                                        i64 k_max) {
    if (eps.kind != Entourage::Kind::cylinder)
        throw config_error("subshift_covering_K: entourage must be a cylinder");
    const int depth = eps.depth;
    const auto cylinder_words = sys.language_words(depth);
    std::string witness_prev, witness_missing;
    for (i64 K = 0; K <= k_max; ++K) {
        const int L = static_cast<int>(K) + depth;
        const auto words = sys.language_words(L, L);
        bool all_contain = true;
        for (const auto& w : words) {
            for (const auto& u : cylinder_words) {
                if (w.find(u) == std::string::npos) {
                    all_contain = false;
                    witness_prev = w;
                    witness_missing = u;
                    break;
                }
            }
            if (!all_contain) break;
        }
        if (all_contain) {
            CoveringCertificate cert;
            cert.system = sys.name();
            cert.system_hash = fnv1a64(subshift_descriptor(sys));
            cert.epsilon = eps;
            cert.covering_k = K;
            cert.slack = 0.0;  // cylinders are exact
            SubshiftCoveringEvidence ev;
            ev.depth = depth;
            ev.cylinder_words = cylinder_words;
            ev.witness_word_prev = K == 0 ? std::string{} : witness_prev;
            ev.witness_missing_word = K == 0 ? std::string{} : witness_missing;
            cert.evidence = std::move(ev);
            return cert;
        }
    }
    throw covering_error(sys.name() + ": no repetitivity radius up to K_max=" +
                         std::to_string(k_max) + " at depth " + std::to_string(depth) +
                         " (still missing \"" + witness_missing + "\")");
}

CoveringCertificate torus_covering_K(const std::vector<CirclePoint>& step, double step_error,
                                     const Entourage& eps, i64 k_max, const std::string& name) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("torus_covering_K: entourage must be a metric ball");
    const int m = static_cast<int>(step.size());
    if (m < 1 || m > 3) throw config_error("torus_covering_K: dimension must be 1..3");

    // grid of cell centers; any point is within half a cell of a center in
    // the max metric, so (worst center distance + half cell) < radius
    // certifies density
    const int G = std::max(8, static_cast<int>(std::ceil(6.0 / eps.radius)));
    if (std::pow(static_cast<double>(G), m) > 4.0e6)
        throw config_error("torus_covering_K: radius too small for the density grid");
    std::size_t cells = 1;
    for (int c = 0; c < m; ++c) cells *= static_cast<std::size_t>(G);
    const u64 half_cell = static_cast<u64>((kFullCircle / (2 * static_cast<u128>(G)))) + 1;
    if (eps.radius_ticks <= half_cell)
        throw config_error("torus_covering_K: grid too coarse for this radius");

    std::vector<u64> centers(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i)
        centers[static_cast<std::size_t>(i)] =
            static_cast<u64>(((2 * static_cast<u128>(i) + 1) << 64) / (2 * static_cast<u128>(G)));

    std::vector<u64> min_dist(cells, ~static_cast<u64>(0));
    std::vector<u64> pos(static_cast<std::size_t>(m), 0);
    std::set<std::vector<u64>> seen;
    double prev_worst = 1.0;
    for (i64 k = 0; k <= k_max; ++k) {
        require_budget(name + " covering", static_cast<double>(k) * step_error, eps.radius);
        if (!seen.insert(pos).second)
            throw covering_error(name + ": orbit closed after " + std::to_string(k) +
                                 " points, not dense at this epsilon");
        // fold the new point into every cell's min distance, tracking the max
        u64 worst = 0;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t rest = cell;
            u64 d = 0;
            for (int c = 0; c < m; ++c) {
                const u64 cd = circ_dist_ticks(centers[rest % static_cast<std::size_t>(G)],
                                               pos[static_cast<std::size_t>(c)]);
                d = std::max(d, cd);
                rest /= static_cast<std::size_t>(G);
            }
            if (d < min_dist[cell]) min_dist[cell] = d;
            worst = std::max(worst, min_dist[cell]);
        }
        if (worst + half_cell < eps.radius_ticks) {
            CoveringCertificate cert;
            cert.system = name;
            cert.system_hash = fnv1a64(name + "|" + std::to_string(step[0].frac));
            cert.epsilon = eps;
            cert.covering_k = k;
            cert.slack = eps.radius - unit_from_ticks(worst + half_cell) -
                         static_cast<double>(k) * step_error;
            TorusCoveringEvidence ev;
            ev.grid_resolution = G;
            ev.worst_min_distance = unit_from_ticks(worst);
            ev.worst_min_distance_prev = prev_worst;
            cert.evidence = ev;
            return cert;
        }
        prev_worst = unit_from_ticks(worst);
        for (int c = 0; c < m; ++c)
            pos[static_cast<std::size_t>(c)] += step[static_cast<std::size_t>(c)].frac;
    }
    throw covering_error(name + ": no covering constant up to K_max=" + std::to_string(k_max) +
                         " at " + eps.str());
}

namespace {

DensityReport make_report(const std::string& system, const Entourage& eps, i64 W, i64 H,
                          const CoveringCertificate& cert, Rational effective_bound,
                          double window_slack, std::vector<DensityRow> rows) {
    DensityReport rep;
    rep.system = system;
    rep.epsilon = eps.str();
    rep.window_length = W;
    rep.horizon = H;
    rep.certificate = cert.summary();
    rep.certified_bound = certified_bound(cert);
    rep.certified_bound_value = rep.certified_bound.value();
    rep.window_slack = window_slack;
    rep.rows = std::move(rows);
    rep.min_measured = 1.0;
    bool first = true;
    for (const auto& r : rep.rows) {
        if (first || r.frequency_value < rep.min_measured) rep.min_measured = r.frequency_value;
        first = false;
        if (r.frequency < effective_bound)
            rep.violations.push_back("point " + r.point + ": frequency " + r.frequency.str() +
                                     " < bound " + effective_bound.str() + " (window at " +
                                     std::to_string(r.argmin_start) + ")");
    }
    rep.margin = rep.min_measured - effective_bound.value();
    return rep;
}

}  // namespace

DensityReport verify_uniform_bound(const RotationSystem& sys, const Entourage& eps,
                                   int grid_points, i64 window_length, i64 horizon,
                                   const CoveringCertificate& cert, int workers) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("verify_uniform_bound: rotation takes metric balls");
    if (cert.epsilon.kind != Entourage::Kind::ball ||
        cert.epsilon.radius > eps.radius / 3.0 + 1e-12)
        throw config_error("verify_uniform_bound: certificate must be at radius <= epsilon/3");
    if (cert.system_hash != fnv1a64(rotation_descriptor(sys)))
        throw config_error("verify_uniform_bound: certificate belongs to a different system");
    const int min_grid = static_cast<int>(std::ceil(10.0 / eps.radius));
    if (grid_points < min_grid)
        throw config_error("verify_uniform_bound: grid spacing must be <= radius/10 (need >= " +
                           std::to_string(min_grid) + " points)");
    require_budget(sys.name, static_cast<double>(horizon) * sys.per_step_error(), eps.radius);

    const Rational bound = certified_bound(cert);
    const Rational effective = bound - Rational::make(1, window_length);

    std::vector<DensityRow> rows(static_cast<std::size_t>(grid_points));
    parallel_for(static_cast<std::size_t>(grid_points), workers, [&](std::size_t i) {
        const u64 x_ticks = static_cast<u64>((static_cast<u128>(i) << 64) /
                                             static_cast<u128>(grid_points));
        const CirclePoint x{x_ticks};
        const auto profile = return_set(sys, x, x, eps, Window{0, horizon});
        const auto est = banach_lower_density(profile, window_length, horizon);
        DensityRow row;
        row.system = sys.name;
        row.point = ticks_to_string(x_ticks);
        row.epsilon = eps.str();
        row.window_begin = 0;
        row.window_end = horizon;
        row.count = static_cast<double>(est.min_count);
        row.max_gap = profile.max_gap;
        row.frequency = est.min_frequency;
        row.frequency_value = est.min_frequency.value();
        row.argmin_start = est.argmin.begin;
        row.margin = (est.min_frequency - effective).value();
        rows[i] = std::move(row);
    });
    return make_report(sys.name, eps, window_length, horizon, cert, effective,
                       Rational::make(1, window_length).value(), std::move(rows));
}

DensityReport verify_uniform_bound(const SubstitutionSystem& sys, const Entourage& eps,
                                   i64 window_length, i64 horizon,
                                   const CoveringCertificate& cert, int workers) {
    if (eps.kind != Entourage::Kind::cylinder)
        throw config_error("verify_uniform_bound: subshift takes cylinder entourages");
    if (cert.epsilon.kind != Entourage::Kind::cylinder || cert.epsilon.depth != eps.depth)
        throw config_error("verify_uniform_bound: certificate depth must equal epsilon depth");

    // base points: one representative per legal depth-cylinder
    const auto words = sys.language_words(eps.depth);
    std::vector<i64> offsets(words.size(), -1);
    {
        std::size_t len = 1024;
        bool all_found = false;
        while (!all_found) {
            const std::string fp = sys.fixed_point_prefix(len);
            all_found = true;
            for (std::size_t i = 0; i < words.size(); ++i) {
                const auto pos = fp.find(words[i]);
                offsets[i] = pos == std::string::npos ? -1 : static_cast<i64>(pos);
                all_found = all_found && offsets[i] >= 0;
            }
            if (!all_found) {
                if (len > (1u << 24))
                    throw covering_error(sys.name() + ": cylinder word not found in fixed point");
                len *= 4;
            }
        }
    }

    const Rational effective = certified_bound(cert);  // cylinders partition: no 1/W slack
    std::vector<DensityRow> rows(words.size());
    parallel_for(words.size(), workers, [&](std::size_t i) {
        const SymbolicPoint x = sys.point_at(offsets[i]);
        const auto profile = return_set(sys, x, x, eps, Window{0, horizon});
        const auto est = banach_lower_density(profile, window_length, horizon);
        DensityRow row;
        row.system = sys.name();
        row.point = "cyl(" + words[i] + ")@" + std::to_string(offsets[i]);
        row.epsilon = eps.str();
        row.window_begin = 0;
        row.window_end = horizon;
        row.count = static_cast<double>(est.min_count);
        row.max_gap = profile.max_gap;
        row.frequency = est.min_frequency;
        row.frequency_value = est.min_frequency.value();
        row.argmin_start = est.argmin.begin;
        row.margin = (est.min_frequency - effective).value();
        rows[i] = std::move(row);
    });
    return make_report(sys.name(), eps, window_length, horizon, cert, effective, 0.0,
                       std::move(rows));
}

std::size_t spot_check_certificate(const RotationSystem& sys, const CoveringCertificate& cert,
                                   int grid_points, int samples, std::uint64_t seed) {
    const double radius = cert.epsilon.radius;
    const u64 r_ticks = cert.epsilon.radius_ticks;
    std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
    auto next_u64 = [&state] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    std::size_t checked = 0;
    for (int s = 0; s < samples; ++s) {
        const u64 y = next_u64();
        for (int g = 0; g < grid_points; ++g) {
            const u64 x = static_cast<u64>((static_cast<u128>(g) << 64) /
                                           static_cast<u128>(grid_points));
            bool hit = false;
            u64 cur = y;
            for (i64 k = 0; k <= cert.covering_k && !hit; ++k) {
                hit = circ_dist_ticks(cur, x) < r_ticks;
                cur += sys.alpha.frac;
            }
            if (!hit)
                throw covering_error(sys.name + ": certificate spot check failed at y=" +
                                     ticks_to_string(y) + " x=" + ticks_to_string(x) +
                                     " radius=" + std::to_string(radius));
            ++checked;
        }
    }
    return checked;
}

}  // namespace recur
