#pragma once

#include <string>
#include <vector>

#include "recur/rational.hpp"
#include "recur/systems.hpp"

// Return-time sets, syndetic gap statistics and windowed lower-density
// estimates.
namespace recur {

// Half-open index window [begin, end).
struct Window {
    i64 begin = 0;
    i64 end = 0;

    i64 length() const { return end - begin; }
};

struct ReturnProfile {
    std::string system;
    std::string base_label;
    std::string epsilon;
    Window window;
    std::vector<i64> times;  // strictly increasing visit times
    i64 max_gap = 0;         // longest visit-free stretch inside the window

    i64 count() const { return static_cast<i64>(times.size()); }
};

// max difference of consecutive elements of {begin-1} u times u {end}, minus 1
i64 max_gap_of(const std::vector<i64>& times, Window w);

// visit times of the orbit of x to eps[y] for n in [w.begin, w.end)
ReturnProfile return_set(const RotationSystem& sys, CirclePoint x, CirclePoint y,
                         const Entourage& eps, Window w);
ReturnProfile return_set(const SubstitutionSystem& sys, SymbolicPoint x, SymbolicPoint y,
                         const Entourage& eps, Window w);
ReturnProfile return_set(const SequenceSystem& sys, i64 x_offset, i64 y_offset,
                         const Entourage& eps, Window w);
ReturnProfile return_set(const AnnulusSystem& sys, AnnulusPoint x, AnnulusPoint y,
                         const Entourage& eps, Window w);

struct DensityEstimate {
    i64 window_length = 0;  // W
    i64 horizon = 0;        // H
    Rational min_frequency{0, 1};
    Window argmin{0, 0};
    i64 min_count = 0;
};

// min over M with M+W <= H of |times n [M, M+W)| / W; times must lie in
// [0, H). Refuses W > H.
DensityEstimate banach_lower_density(const std::vector<i64>& times, i64 window_length, i64 horizon);

inline DensityEstimate banach_lower_density(const ReturnProfile& profile, i64 window_length,
                                            i64 horizon) {
    return banach_lower_density(profile.times, window_length, horizon);
}

// Gap-to-density bound: a set meeting every length-(L+1) block
// has lower density at least 1/(L+1).
inline Rational gap_to_density_bound(i64 max_gap) {
    if (max_gap < 0) throw config_error("gap_to_density_bound: gap must be >= 0");
    return Rational::make(1, max_gap + 1);
}

}  // namespace recur
