#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recur/errors.hpp"
#include "recur/fixedpoint.hpp"

// Concrete compact systems with explicit arithmetic error budgets: circle
// rotations in 64-bit fixed point, primitive substitution subshifts, torus
// translation actions of Z^d, an annulus twist map, and synthetic one-sided
// sequences for edge cases.
namespace recur {

// ---------------------------------------------------------------------------
// Entourages: metric balls (strict, open) and cylinder relations.
// ---------------------------------------------------------------------------

struct Entourage {
    enum class Kind { ball, cylinder };

    Kind kind = Kind::ball;
    double radius = 0.0;  // ball only
    u64 radius_ticks = 0;
    int depth = 0;  // cylinder only

    static Entourage ball(double r) {
        if (!(r > 0.0)) throw config_error("entourage: ball radius must be > 0");
        Entourage e;
        e.kind = Kind::ball;
        e.radius = r;
        e.radius_ticks = ticks_from_unit(r);
        return e;
    }

    static Entourage cylinder(int depth) {
        if (depth < 1) throw config_error("entourage: cylinder depth must be >= 1");
        Entourage e;
        e.kind = Kind::cylinder;
        e.depth = depth;
        return e;
    }

    // The chained-thirds shrink: radius/3 for balls; cylinders are
    // equivalence relations and shrink to themselves.
    Entourage third() const {
        return kind == Kind::ball ? ball(radius / 3.0) : *this;
    }

    std::string str() const {
        return kind == Kind::ball ? "ball(" + std::to_string(radius) + ")"
                                  : "cylinder(" + std::to_string(depth) + ")";
    }
};

// ---------------------------------------------------------------------------
// Circle rotations.
// ---------------------------------------------------------------------------

struct RotationSystem {
    CirclePoint alpha;
    double alpha_error = 0.0;  // bound on |represented - intended real|
    std::string name;

    static RotationSystem golden();
    static RotationSystem from_rational(i64 p, i64 q, std::string name = {});
    static RotationSystem from_double(double a, std::string name = {});

    double per_step_error() const { return alpha_error + kTick; }

    CirclePoint iterate(CirclePoint x, i64 n) const { return x + alpha.scaled(n); }
};

inline bool in_entourage(const Entourage& eps, CirclePoint x, CirclePoint y) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("in_entourage: circle points take metric balls");
    return circ_dist_ticks(x, y) < eps.radius_ticks;
}

// ---------------------------------------------------------------------------
// Primitive substitution subshifts (one-sided).
// ---------------------------------------------------------------------------

struct SymbolicPoint {
    int seed = 0;              // symbol whose expansion generates the sequence
    int generation_depth = 0;  // expansion rounds needed when materialized
    i64 offset = 0;            // shift position into the fixed point
};

class SubstitutionSystem {
  public:
    // alphabet example "01"; rules maps each alphabet char to a nonempty word
    // over the alphabet. Throws config_error when the substitution is not
    // primitive.
    SubstitutionSystem(std::string alphabet, std::map<char, std::string> rules,
                       std::string name = {});

    const std::string& alphabet() const { return alphabet_; }
    const std::string& name() const { return name_; }
    int primitive_power() const { return primitive_power_; }
    char seed_char() const { return alphabet_[static_cast<std::size_t>(seed_symbol_)]; }

    // Prefix of the one-sided fixed point, at least `len` chars.
    std::string fixed_point_prefix(std::size_t len) const;

    SymbolicPoint point_at(i64 offset) const;
    SymbolicPoint shift(SymbolicPoint p, i64 n) const;

    // word starting at p, k chars
    std::string word_at(SymbolicPoint p, int k) const;

    // Exactly the factors of the given length occurring in the subshift.
    // Complete: every factor of the infinite word is a factor of sigma^m(uv)
    // for a legal two-letter word uv once the shortest letter image reaches
    // the requested length.
    std::vector<std::string> language_words(int length, int max_length = 64) const;

    // Legal two-letter factors (closure under taking 2-factors of images).
    std::vector<std::string> legal_pairs() const;

  private:
    std::string apply_rules(const std::string& w, int times = 1) const;

    std::string alphabet_;
    std::vector<std::string> rules_;  // by symbol index
    std::string name_;
    int primitive_power_ = 0;
    int seed_symbol_ = 0;
    int seed_power_ = 1;  // sigma^seed_power fixes the seed's first letter
};

bool in_entourage(const SubstitutionSystem& sys, const Entourage& eps, SymbolicPoint x,
                  SymbolicPoint y);

// ---------------------------------------------------------------------------
// Synthetic one-sided sequences (finite prefix, then a constant fill).
// Not minimal; used for edge cases and density oracles.
// ---------------------------------------------------------------------------

struct SequenceSystem {
    std::string prefix;
    char fill = '0';
    std::string name;

    char at(i64 i) const {
        return i < static_cast<i64>(prefix.size()) ? prefix[static_cast<std::size_t>(i)] : fill;
    }
    std::string word_at(i64 offset, int k) const;
};

// ---------------------------------------------------------------------------
// Torus translation actions of Z^d.
// ---------------------------------------------------------------------------

using TorusPoint = std::vector<CirclePoint>;

struct TorusZdAction {
    int d = 1;  // acting group Z^d
    int m = 1;  // torus dimension
    std::vector<std::vector<CirclePoint>> generators;  // d vectors of m coords
    std::vector<double> generator_error;               // per generator
    std::string name;

    static TorusZdAction product_of_rotations(const std::vector<RotationSystem>& rotations,
                                              std::string name = {});

    TorusPoint act(const std::vector<i64>& n, const TorusPoint& x) const;

    // true when m == d and generator j moves only coordinate j; the covering
    // search requires this product structure
    bool axis_aligned() const;

    double per_step_error(const std::vector<i64>& n) const;
};

bool in_entourage(const Entourage& eps, const TorusPoint& x, const TorusPoint& y);

// ---------------------------------------------------------------------------
// Annulus twist (r, theta) -> (r, theta + r) on countably many circles
// accumulating on an inner circle. Radii: r0 = (1+a)pi, rn = (1+a+g_n/n)pi
// with rational g_n -> 1 (default g_n = n/(n+1)).
// ---------------------------------------------------------------------------

struct AnnulusPoint {
    i64 circle = 0;  // 0 = inner circle, n >= 1 = n-th outer circle
    double theta = 0.0;
};

struct AnnulusSystem {
    double alpha = 0.0;  // small irrational > 0
    std::map<i64, std::pair<i64, i64>> gamma_override;  // n -> rational gamma_n
    std::string name;

    static AnnulusSystem standard(double alpha, std::string name = {});

    double gamma(i64 n) const;    // rational gamma_n as double
    double radius_of(i64 circle) const;

    AnnulusPoint iterate(AnnulusPoint p, i64 n) const;

    // Angular distance between the n-step images (applied 2n times) of
    // (r0, theta) and (r_{2n}, theta), computed by direct stepwise
    // simulation of the twist.
    double equicontinuity_defect(i64 n, double theta) const;

    double per_step_error() const { return 4e-15; }  // stepwise wrap rounding
};

bool in_entourage(const AnnulusSystem& sys, const Entourage& eps, const AnnulusPoint& x,
                  const AnnulusPoint& y);

double circ_angle_dist(double a, double b);  // on [0, 2*pi)

}  // namespace recur
