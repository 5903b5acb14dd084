#pragma once

#include <array>
#include <string>
#include <vector>

#include "recur/report.hpp"
#include "recur/systems.hpp"

// Continuous-time linear flows on the 2-torus: exact visit-interval
// computation, the displacement constants that turn point visits into
// interval credit, and the certified window-average bound driven by the
// time-alpha skeleton map.
namespace recur {

struct LinearFlow {
    std::array<double, 2> v{1.0, 0.0};
    std::string name;

    static LinearFlow make(double vx, double vy, std::string name = {});

    double speed() const;  // Euclidean |v|

    std::array<double, 2> at(double t, std::array<double, 2> x) const;

    // rounding per unit time in the position computation
    double per_unit_error() const;
};

// max-metric circular distance between torus points
double torus_dist(const std::array<double, 2>& a, const std::array<double, 2>& b);

struct VisitIntervals {
    double t_begin = 0;
    double t_end = 0;
    std::vector<std::pair<double, double>> intervals;  // disjoint, sorted
    double total_measure = 0;
};

// Exact support of {t in [t1, t2] : t.x in eps[x]} via per-coordinate
// crossing times; flows are translations, so the support is base-point free.
VisitIntervals visit_intervals(const LinearFlow& flow, std::array<double, 2> x, double radius,
                               double t1, double t2);

struct DisplacementConstants {
    double radius = 0;  // the target entourage
    double delta = 0;   // radius / 2
    double alpha = 0;   // radius / (2 * speed)
};

// If a trajectory point lands in the delta-ball of x, the next alpha time
// units stay inside the radius-ball of x.
DisplacementConstants displacement_constants(const LinearFlow& flow, double radius);

struct FlowBoundOptions {
    double horizon = 10000.0;
    std::vector<double> window_ladder{100.0, 1000.0};
    double cert_radius = 0.0;  // 0 = delta; must be <= delta
    int grid_points = 8;       // reporting grid (translation flows: identical rows)
    i64 k_max = 100000;
    int workers = 1;
};

struct FlowWindowResult {
    double window = 0;
    double certified = 0;  // alpha * floor(W / ((K+1) alpha)) / W
    double measured_min = 0;
    double argmin_t = 0;
    double margin = 0;
};

struct FlowBoundReport {
    DensityReport report;  // rows per (grid point, window)
    std::vector<FlowWindowResult> windows;
    DisplacementConstants constants;
    i64 skeleton_k = 0;
};

FlowBoundReport flow_uniform_bound(const LinearFlow& flow, double radius,
                                   const FlowBoundOptions& opt);

// min over T in [t_begin, t_end - W] of measure(intervals n [T, T+W]); the
// function is piecewise linear in T, so the minimum sits at an interval
// endpoint shifted by 0 or W.
std::pair<double, double> min_window_measure(const VisitIntervals& visits, double window);

}  // namespace recur
