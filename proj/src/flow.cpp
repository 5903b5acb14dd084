#include "recur/flow.hpp"

#include <algorithm>
#include <cmath>

#include "recur/covering.hpp"

namespace recur {

LinearFlow LinearFlow::make(double vx, double vy, std::string name) {
    LinearFlow f;
    f.v = {vx, vy};
    f.name = name.empty() ? "flow(" + std::to_string(vx) + "," + std::to_string(vy) + ")"
                          : std::move(name);
    return f;
}

double LinearFlow::speed() const { return std::hypot(v[0], v[1]); }

std::array<double, 2> LinearFlow::at(double t, std::array<double, 2> x) const {
    auto wrap = [](double a) {
        a -= std::floor(a);
        return a;
    };
    return {wrap(x[0] + t * v[0]), wrap(x[1] + t * v[1])};
}

double LinearFlow::per_unit_error() const {
    return (std::abs(v[0]) + std::abs(v[1])) * 1e-15;
}

double torus_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    double m = 0;
    for (int i = 0; i < 2; ++i) {
        double d = std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]);
        d -= std::floor(d);
        m = std::max(m, std::min(d, 1.0 - d));
    }
    return m;
}

namespace {

// {t in [t1, t2] : circ dist of t*v_i from 0 < r} for one coordinate, as a
// sorted list of intervals. v may be negative; zero velocity means the
// coordinate never leaves the ball.
std::vector<std::pair<double, double>> coordinate_intervals(double v, double r, double t1,
                                                            double t2) {
    if (r >= 0.5 || v == 0.0) return {{t1, t2}};
    const double av = std::abs(v);
    std::vector<std::pair<double, double>> out;
    // windings k with (k - r)/av <= t2 and (k + r)/av >= t1
    const i64 k_lo = static_cast<i64>(std::floor(t1 * av - r));
    const i64 k_hi = static_cast<i64>(std::ceil(t2 * av + r));
    for (i64 k = k_lo; k <= k_hi; ++k) {
        const double lo = (static_cast<double>(k) - r) / av;
        const double hi = (static_cast<double>(k) + r) / av;
        const double a = std::max(lo, t1);
        const double b = std::min(hi, t2);
        if (a < b) out.emplace_back(a, b);
    }
    return out;
}

std::vector<std::pair<double, double>> intersect_sorted(
    const std::vector<std::pair<double, double>>& a,
    const std::vector<std::pair<double, double>>& b) {
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return out;
}

}  // namespace

VisitIntervals visit_intervals(const LinearFlow& flow, std::array<double, 2> x, double radius,
                               double t1, double t2) {
    (void)x;  // translations: the visit set to eps[x] from x is base-point free
    if (!(t2 > t1)) throw config_error("visit_intervals: need t2 > t1");
    if (!(radius > 0.0)) throw config_error("visit_intervals: radius must be > 0");
    require_budget(flow.name, std::abs(t2) * flow.per_unit_error(), radius);

    auto joint = intersect_sorted(coordinate_intervals(flow.v[0], radius, t1, t2),
                                  coordinate_intervals(flow.v[1], radius, t1, t2));
    VisitIntervals vis;
    vis.t_begin = t1;
    vis.t_end = t2;
    vis.intervals = std::move(joint);
    for (const auto& [a, b] : vis.intervals) vis.total_measure += b - a;
    return vis;
}

DisplacementConstants displacement_constants(const LinearFlow& flow, double radius) {
    const double s = flow.speed();
    if (!(s > 0.0)) throw config_error("displacement_constants: zero speed flow");
    if (!(radius > 0.0)) throw config_error("displacement_constants: radius must be > 0");
    return DisplacementConstants{radius, radius / 2.0, radius / (2.0 * s)};
}

std::pair<double, double> min_window_measure(const VisitIntervals& visits, double window) {
    const double t1 = visits.t_begin, t2 = visits.t_end;
    if (!(window > 0.0) || window > t2 - t1)
        throw config_error("min_window_measure: window must be in (0, t2 - t1]");
    // prefix measure at time t
    std::vector<double> starts, prefix;
    starts.reserve(visits.intervals.size());
    prefix.reserve(visits.intervals.size() + 1);
    prefix.push_back(0.0);
    double acc = 0;
    for (const auto& [a, b] : visits.intervals) {
        starts.push_back(a);
        acc += b - a;
        prefix.push_back(acc);
    }
    auto measure_upto = [&](double t) {
        // total measure of intervals clipped to (-inf, t]
        const auto it = std::upper_bound(starts.begin(), starts.end(), t);
        const std::size_t idx = static_cast<std::size_t>(it - starts.begin());
        if (idx == 0) return 0.0;
        const auto& iv = visits.intervals[idx - 1];
        return prefix[idx - 1] + std::min(t, iv.second) - iv.first;
    };
    auto window_measure = [&](double T) { return measure_upto(T + window) - measure_upto(T); };

    // candidate minima: interval endpoints shifted to either window edge,
    // scanned in increasing order so ties resolve to the earliest start
    std::vector<double> candidates{t1, t2 - window};
    for (const auto& [a, b] : visits.intervals) {
        candidates.push_back(a);
        candidates.push_back(b);
        candidates.push_back(a - window);
        candidates.push_back(b - window);
    }
    std::sort(candidates.begin(), candidates.end());
    double best_T = t1;
    double best = window_measure(t1);
    for (double T : candidates) {
        if (T < t1 || T > t2 - window) continue;
        const double m = window_measure(T);
        if (m < best) {
            best = m;
            best_T = T;
        }
    }
    return {best, best_T};
}

FlowBoundReport flow_uniform_bound(const LinearFlow& flow, double radius,
                                   const FlowBoundOptions& opt) {
    const auto constants = displacement_constants(flow, radius);
    const double cert_radius = opt.cert_radius > 0.0 ? opt.cert_radius : constants.delta;
    if (cert_radius > constants.delta + 1e-12)
        throw config_error("flow_uniform_bound: skeleton certificate radius must be <= radius/2");

    // time-alpha skeleton: an exact fixed-point torus translation
    const double a = constants.alpha;
    auto frac = [](double x) { return x - std::floor(x); };
    const std::vector<CirclePoint> step{CirclePoint{ticks_from_unit(frac(a * flow.v[0]))},
                                        CirclePoint{ticks_from_unit(frac(a * flow.v[1]))}};
    const auto cert = torus_covering_K(step, 2 * kTick, Entourage::ball(cert_radius), opt.k_max,
                                       flow.name + "/skeleton");
    const i64 K = cert.covering_k;

    const auto visits = visit_intervals(flow, {0.0, 0.0}, radius, 0.0, opt.horizon);

    FlowBoundReport out;
    out.constants = constants;
    out.skeleton_k = K;
    DensityReport& rep = out.report;
    rep.system = flow.name;
    rep.epsilon = Entourage::ball(radius).str();
    rep.continuous = true;
    rep.horizon = static_cast<i64>(opt.horizon);
    rep.certificate = cert.summary();
    rep.certified_bound = certified_bound(cert);
    const int grid = std::max(1, opt.grid_points);

    double worst_margin = 1e300;
    double min_measured = 1e300;
    double max_certified = 0.0;
    for (double W : opt.window_ladder) {
        const double blocks = std::floor(W / (static_cast<double>(K + 1) * a));
        const double certified = a * blocks / W;
        const auto [measure, arg_t] = min_window_measure(visits, W);
        const double measured = measure / W;
        out.windows.push_back({W, certified, measured, arg_t, measured - certified});
        worst_margin = std::min(worst_margin, measured - certified);
        min_measured = std::min(min_measured, measured);
        max_certified = std::max(max_certified, certified);
        for (int g = 0; g < grid; ++g) {
            DensityRow row;
            row.system = flow.name;
            const u64 ticks =
                static_cast<u64>((static_cast<u128>(g) << 64) / static_cast<u128>(grid));
            row.point = "diag(" + ticks_to_string(ticks) + ")@W=" + format_double(W);
            row.epsilon = rep.epsilon;
            row.window_begin = 0;
            row.window_end = static_cast<i64>(opt.horizon);
            row.count = measure;
            row.max_gap = -1;
            row.exact = false;
            row.frequency_value = measured;
            row.argmin_start = static_cast<i64>(arg_t);
            row.margin = measured - certified;
            rep.rows.push_back(std::move(row));
        }
        if (measured < certified)
            rep.violations.push_back("W=" + format_double(W) + ": measured " +
                                     format_double(measured) + " < certified " +
                                     format_double(certified));
    }
    rep.window_length = static_cast<i64>(opt.window_ladder.front());
    rep.certified_bound_value = max_certified;
    rep.min_measured = min_measured;
    rep.margin = worst_margin;
    return out;
}

}  // namespace recur
