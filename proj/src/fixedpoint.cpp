#include "recur/fixedpoint.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace recur {

u128 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    long double seed = sqrtl(static_cast<long double>(n));
    u128 x = static_cast<u128>(seed);
    if (x > 0) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    while (x * x > n) --x;
    return x;
}

u64 golden_conjugate_ticks() {
    // floor(sqrt(5 * 2^124)) = floor(sqrt(5) * 2^62)
    const u128 radicand = static_cast<u128>(5) << 124;
    const u128 s = isqrt_u128(radicand);
    // (sqrt(5) - 1)/2 * 2^64 = 2 * (sqrt(5) * 2^62) - 2^63
    const u128 t = 2 * s - (static_cast<u128>(1) << 63);
    return static_cast<u64>(t);
}

u64 ticks_from_rational(i64 p, i64 q, double* error_out) {
    if (q <= 0) throw std::invalid_argument("ticks_from_rational: denominator must be positive");
    i64 pm = p % q;
    if (pm < 0) pm += q;
    const u128 num = static_cast<u128>(static_cast<u64>(pm)) << 64;
    const u128 quot = num / static_cast<u128>(q);
    const u128 rem = num % static_cast<u128>(q);
    if (error_out) {
        *error_out = rem == 0 ? 0.0
                              : static_cast<double>(static_cast<u64>(rem)) /
                                    (static_cast<double>(q) * 18446744073709551616.0);
    }
    return static_cast<u64>(quot);
}

std::string ticks_to_string(u64 t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", unit_from_ticks(t));
    return buf;
}

}  // namespace recur
