#include "recur/returns.hpp"

#include <algorithm>
#include <limits>

#include "recur/kernels/kernels.hpp"

namespace recur {

i64 max_gap_of(const std::vector<i64>& times, Window w) {
    i64 prev = w.begin - 1;
    i64 max_gap = 0;
    for (i64 t : times) {
        max_gap = std::max(max_gap, t - prev - 1);
        prev = t;
    }
    max_gap = std::max(max_gap, w.end - prev - 1);
    return max_gap;
}

namespace {

void check_window(Window w) {
    if (w.begin < 0 || w.end <= w.begin) throw config_error("return_set: bad window");
    if (w.end - w.begin > std::numeric_limits<std::uint32_t>::max())
        throw config_error("return_set: window too long");
}

ReturnProfile profile_from_relative(std::string system, std::string base, std::string eps,
                                    Window w, const std::vector<std::uint32_t>& rel) {
    ReturnProfile p;
    p.system = std::move(system);
    p.base_label = std::move(base);
    p.epsilon = std::move(eps);
    p.window = w;
    p.times.reserve(rel.size());
    for (std::uint32_t r : rel) p.times.push_back(w.begin + static_cast<i64>(r));
    p.max_gap = max_gap_of(p.times, w);
    return p;
}

}  // namespace

ReturnProfile return_set(const RotationSystem& sys, CirclePoint x, CirclePoint y,
                         const Entourage& eps, Window w) {
    check_window(w);
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("return_set(rotation): entourage must be a metric ball");
    require_budget(sys.name, static_cast<double>(w.end) * sys.per_step_error(), eps.radius);

    const u64 r = eps.radius_ticks;
    const std::uint32_t n = static_cast<std::uint32_t>(w.end - w.begin);
    std::vector<std::uint32_t> rel;
    if (r > (static_cast<u64>(1) << 63)) {
        // ball wider than half the circle: everything is inside
        rel.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) rel[i] = i;
    } else if (r == (static_cast<u64>(1) << 63)) {
        // exactly half: inside unless antipodal (strict boundary)
        const u64 start = (x.frac - y.frac) + sys.alpha.frac * static_cast<u64>(w.begin);
        u64 cur = start;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (circ_dist_ticks(cur, 0) < r) rel.push_back(i);
            cur += sys.alpha.frac;
        }
    } else {
        // dist((x - y) + n*alpha, 0) < r  <=>  (x - y) + r + n*alpha < 2r
        const u64 first = (x.frac - y.frac) + r + sys.alpha.frac * static_cast<u64>(w.begin);
        kernels::collect_visits_u64(first, sys.alpha.frac, 2 * r, n, rel);
    }
    return profile_from_relative(sys.name, ticks_to_string(x.frac), eps.str(), w, rel);
}

ReturnProfile return_set(const SubstitutionSystem& sys, SymbolicPoint x, SymbolicPoint y,
                         const Entourage& eps, Window w) {
    check_window(w);
    if (eps.kind != Entourage::Kind::cylinder)
        throw config_error("return_set(subshift): entourage must be a cylinder");
    const int k = eps.depth;
    const std::string pattern = sys.word_at(y, k);
    const std::string fp = sys.fixed_point_prefix(
        static_cast<std::size_t>(x.offset + w.end) + static_cast<std::size_t>(k));
    const auto* hay = reinterpret_cast<const std::uint8_t*>(fp.data()) + x.offset + w.begin;
    const std::size_t hay_len = static_cast<std::size_t>(w.end - w.begin) + static_cast<std::size_t>(k) - 1;
    std::vector<std::uint32_t> rel;
    kernels::find_matches_u8(hay, hay_len, reinterpret_cast<const std::uint8_t*>(pattern.data()),
                             static_cast<std::size_t>(k), rel);
    return profile_from_relative(sys.name(), "offset=" + std::to_string(x.offset), eps.str(), w,
                                 rel);
}

ReturnProfile return_set(const SequenceSystem& sys, i64 x_offset, i64 y_offset,
                         const Entourage& eps, Window w) {
    check_window(w);
    if (eps.kind != Entourage::Kind::cylinder)
        throw config_error("return_set(sequence): entourage must be a cylinder");
    const int k = eps.depth;
    const std::string pattern = sys.word_at(y_offset, k);
    const std::string hay = sys.word_at(x_offset + w.begin,
                                        static_cast<int>(w.end - w.begin) + k - 1);
    std::vector<std::uint32_t> rel;
    kernels::find_matches_u8(reinterpret_cast<const std::uint8_t*>(hay.data()), hay.size(),
                             reinterpret_cast<const std::uint8_t*>(pattern.data()),
                             static_cast<std::size_t>(k), rel);
    return profile_from_relative(sys.name, "offset=" + std::to_string(x_offset), eps.str(), w, rel);
}

ReturnProfile return_set(const AnnulusSystem& sys, AnnulusPoint x, AnnulusPoint y,
                         const Entourage& eps, Window w) {
    check_window(w);
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("return_set(annulus): entourage must be a metric ball");
    require_budget(sys.name, static_cast<double>(w.end) * sys.per_step_error(), eps.radius);
    ReturnProfile p;
    p.system = sys.name;
    p.base_label = "circle=" + std::to_string(x.circle) + ",theta=" + std::to_string(x.theta);
    p.epsilon = eps.str();
    p.window = w;
    for (i64 n = w.begin; n < w.end; ++n) {
        if (in_entourage(sys, eps, sys.iterate(x, n), y)) p.times.push_back(n);
    }
    p.max_gap = max_gap_of(p.times, w);
    return p;
}

DensityEstimate banach_lower_density(const std::vector<i64>& times, i64 window_length,
                                     i64 horizon) {
    if (window_length < 1) throw config_error("banach_lower_density: window must be >= 1");
    if (horizon < window_length)
        throw config_error("banach_lower_density: horizon " + std::to_string(horizon) +
                           " shorter than window " + std::to_string(window_length));
    if (horizon > 100000000)
        throw config_error("banach_lower_density: horizon above 1e8 (prefix table would not fit)");
    // prefix[i] = number of visit times < i
    std::vector<std::uint32_t> prefix(static_cast<std::size_t>(horizon) + 1, 0);
    for (i64 t : times) {
        if (t < 0 || t >= horizon)
            throw config_error("banach_lower_density: visit time outside [0, horizon)");
        ++prefix[static_cast<std::size_t>(t) + 1];
    }
    for (std::size_t i = 1; i < prefix.size(); ++i) prefix[i] += prefix[i - 1];
    const auto wm = kernels::min_window_diff_u32(prefix.data(), prefix.size(),
                                                 static_cast<std::uint32_t>(window_length));
    DensityEstimate e;
    e.window_length = window_length;
    e.horizon = horizon;
    e.min_count = wm.min_count;
    e.min_frequency = Rational::make(wm.min_count, window_length);
    e.argmin = Window{static_cast<i64>(wm.argmin), static_cast<i64>(wm.argmin) + window_length};
    return e;
}

}  // namespace recur
