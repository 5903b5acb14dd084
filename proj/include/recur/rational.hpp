#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace recur {

// Exact rational with 64-bit terms. Frequencies, gap bounds and margins in
// this library are ratios of window counts, so magnitudes stay tiny; the
// comparisons go through 128-bit cross products and never overflow.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rational{n, d};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend Rational operator+(Rational a, Rational b) {
        const __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
        const __int128 d = static_cast<__int128>(a.den) * b.den;
        const __int128 g = gcd128(n < 0 ? -n : n, d);
        return Rational{static_cast<std::int64_t>(n / g), static_cast<std::int64_t>(d / g)};
    }
    friend Rational operator-(Rational a, Rational b) { return a + Rational{-b.num, b.den}; }
    friend Rational operator*(Rational a, Rational b) {
        const __int128 n = static_cast<__int128>(a.num) * b.num;
        const __int128 d = static_cast<__int128>(a.den) * b.den;
        const __int128 g = gcd128(n < 0 ? -n : n, d);
        return Rational{static_cast<std::int64_t>(n / g), static_cast<std::int64_t>(d / g)};
    }

    friend bool operator==(Rational a, Rational b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(Rational a, Rational b) { return !(b < a); }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator>=(Rational a, Rational b) { return !(a < b); }

  private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { const __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
};

}  // namespace recur
