#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

namespace recur {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// One tick of the 64-bit circle, 2^-64 as a double.
inline constexpr double kTick = 5.421010862427522e-20;

// A point of the unit circle stored as a 64-bit fixed-point fraction:
// value = frac / 2^64 in [0, 1). Addition wraps, so arithmetic is exactly
// modular; n * frac (wrapping) equals n * value mod 1 with no error at all.
struct CirclePoint {
    u64 frac = 0;

    friend bool operator==(CirclePoint a, CirclePoint b) { return a.frac == b.frac; }
    friend bool operator!=(CirclePoint a, CirclePoint b) { return a.frac != b.frac; }

    friend CirclePoint operator+(CirclePoint a, CirclePoint b) { return {a.frac + b.frac}; }
    friend CirclePoint operator-(CirclePoint a, CirclePoint b) { return {a.frac - b.frac}; }

    // n may be negative; two's-complement wraparound keeps this exact mod 1.
    CirclePoint scaled(i64 n) const { return {frac * static_cast<u64>(n)}; }

    double unit() const { return static_cast<double>(frac) * kTick; }
};

// Circular distance in ticks: min(d, 2^64 - d).
inline u64 circ_dist_ticks(u64 a, u64 b) {
    const u64 d = a - b;
    return std::min(d, static_cast<u64>(0) - d);
}

inline u64 circ_dist_ticks(CirclePoint a, CirclePoint b) { return circ_dist_ticks(a.frac, b.frac); }

// Deterministic round-to-nearest conversion of a unit fraction to ticks.
// Uses 80-bit extended precision so the product x * 2^64 is exact.
inline u64 ticks_from_unit(double x) {
    if (x <= 0.0) return 0;
    if (x >= 1.0) return ~static_cast<u64>(0);
    const long double v = static_cast<long double>(x) * 18446744073709551616.0L;
    return static_cast<u64>(v + 0.5L);
}

inline double unit_from_ticks(u64 t) { return static_cast<double>(t) * kTick; }

// floor(sqrt(n)) for 128-bit n. Newton refinement around a long-double seed;
// valid while (x+1)^2 stays inside 128 bits, which holds for every radicand
// used here.
u128 isqrt_u128(u128 n);

// (sqrt(5) - 1) / 2 in ticks, computed by integer square root; the result is
// within 2 ticks of the real number, so the representation error bound below
// is 2^-63.
u64 golden_conjugate_ticks();

inline constexpr double kGoldenTickError = 1.0842021724855044e-19;  // 2^-63

// frac = floor(p * 2^64 / q) with the exact remainder folded into *error_out
// (zero whenever q divides p * 2^64, e.g. q a power of two).
u64 ticks_from_rational(i64 p, i64 q, double* error_out);

std::string ticks_to_string(u64 t);  // decimal unit fraction, round-trip stable

}  // namespace recur
