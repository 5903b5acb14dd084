#include "recur/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace recur {

// ---------------------------------------------------------------------------
// Rotations
// ---------------------------------------------------------------------------

RotationSystem RotationSystem::golden() {
    RotationSystem r;
    r.alpha = CirclePoint{golden_conjugate_ticks()};
    r.alpha_error = kGoldenTickError;
    r.name = "rotation(golden)";
    return r;
}

RotationSystem RotationSystem::from_rational(i64 p, i64 q, std::string name) {
    RotationSystem r;
    double err = 0.0;
    r.alpha = CirclePoint{ticks_from_rational(p, q, &err)};
    r.alpha_error = err;
    r.name = name.empty() ? "rotation(" + std::to_string(p) + "/" + std::to_string(q) + ")"
                          : std::move(name);
    return r;
}

RotationSystem RotationSystem::from_double(double a, std::string name) {
    RotationSystem r;
    a -= std::floor(a);
    r.alpha = CirclePoint{ticks_from_unit(a)};
    r.alpha_error = kTick;  // nearest-tick rounding of the given real
    r.name = name.empty() ? "rotation(" + std::to_string(a) + ")" : std::move(name);
    return r;
}

// ---------------------------------------------------------------------------
// Substitution subshifts
// ---------------------------------------------------------------------------

namespace {

// some power <= n*n of the incidence matrix is entrywise positive
int primitive_power_of(const std::vector<std::vector<bool>>& reach) {
    const std::size_t n = reach.size();
    std::vector<std::vector<bool>> acc = reach;
    for (int p = 1; p <= static_cast<int>(n * n); ++p) {
        bool all = true;
        for (const auto& row : acc)
            for (bool v : row) all = all && v;
        if (all) return p;
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (acc[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[k][j]) next[i][j] = true;
        acc = std::move(next);
    }
    return 0;
}

}  // namespace

SubstitutionSystem::SubstitutionSystem(std::string alphabet, std::map<char, std::string> rules,
                                       std::string name)
    : alphabet_(std::move(alphabet)), name_(std::move(name)) {
    if (alphabet_.size() < 2) throw config_error("substitution: alphabet needs >= 2 symbols");
    rules_.resize(alphabet_.size());
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        const auto it = rules.find(alphabet_[i]);
        if (it == rules.end() || it->second.empty())
            throw config_error(std::string("substitution: missing or empty rule for '") +
                               alphabet_[i] + "'");
        for (char c : it->second)
            if (alphabet_.find(c) == std::string::npos)
                throw config_error(std::string("substitution: rule image uses unknown symbol '") +
                                   c + "'");
        rules_[i] = it->second;
    }
    if (rules.size() != alphabet_.size())
        throw config_error("substitution: rules for symbols outside the alphabet");

    // primitivity: symbol j reachable in the image of symbol i
    const std::size_t n = alphabet_.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (char c : rules_[i]) reach[i][static_cast<std::size_t>(alphabet_.find(c))] = true;
    primitive_power_ = primitive_power_of(reach);
    if (primitive_power_ == 0)
        throw config_error("substitution: not primitive (no power of the incidence matrix is positive)");

    // seed: follow first letters until a cycle closes; sigma^cycle fixes it
    std::vector<int> first(n);
    for (std::size_t i = 0; i < n; ++i)
        first[i] = static_cast<int>(alphabet_.find(rules_[i][0]));
    std::vector<int> seen_at(n, -1);
    int s = 0, step = 0;
    while (seen_at[static_cast<std::size_t>(s)] < 0) {
        seen_at[static_cast<std::size_t>(s)] = step++;
        s = first[static_cast<std::size_t>(s)];
    }
    seed_symbol_ = s;
    seed_power_ = step - seen_at[static_cast<std::size_t>(s)];

    if (name_.empty()) name_ = "subshift";
}

std::string SubstitutionSystem::apply_rules(const std::string& w, int times) const {
    std::string cur = w;
    for (int t = 0; t < times; ++t) {
        std::string next;
        next.reserve(cur.size() * 2);
        for (char c : cur) next += rules_[alphabet_.find(c)];
        cur = std::move(next);
    }
    return cur;
}

std::string SubstitutionSystem::fixed_point_prefix(std::size_t len) const {
    if (len > (static_cast<std::size_t>(1) << 28))
        throw config_error("fixed_point_prefix: requested length above 2^28");
    std::string w(1, alphabet_[static_cast<std::size_t>(seed_symbol_)]);
    // sigma^seed_power(seed) starts with seed, so each round extends a prefix
    while (w.size() < len) {
        std::string next = apply_rules(w, seed_power_);
        if (next.size() <= w.size())
            throw config_error("substitution: expansion does not grow");  // cannot happen if primitive
        w = std::move(next);
    }
    return w;
}

SymbolicPoint SubstitutionSystem::point_at(i64 offset) const {
    if (offset < 0) throw config_error("symbolic point: offset must be >= 0");
    // depth = rounds of sigma^seed_power needed to expose this offset
    int depth = 0;
    std::string w(1, alphabet_[static_cast<std::size_t>(seed_symbol_)]);
    while (static_cast<i64>(w.size()) <= offset) {
        w = apply_rules(w, seed_power_);
        ++depth;
    }
    return SymbolicPoint{seed_symbol_, depth, offset};
}

SymbolicPoint SubstitutionSystem::shift(SymbolicPoint p, i64 n) const {
    if (p.offset + n < 0) throw config_error("symbolic shift: negative offset");
    return point_at(p.offset + n);
}

std::string SubstitutionSystem::word_at(SymbolicPoint p, int k) const {
    const std::string fp = fixed_point_prefix(static_cast<std::size_t>(p.offset) + static_cast<std::size_t>(k));
    return fp.substr(static_cast<std::size_t>(p.offset), static_cast<std::size_t>(k));
}

std::vector<std::string> SubstitutionSystem::legal_pairs() const {
    std::set<std::string> pairs;
    std::string w(1, alphabet_[static_cast<std::size_t>(seed_symbol_)]);
    while (w.size() < 2) w = apply_rules(w, seed_power_);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) pairs.insert(w.substr(i, 2));
    // close under taking 2-factors of images
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::string> next = pairs;
        for (const auto& uv : pairs) {
            const std::string im = apply_rules(uv);
            for (std::size_t i = 0; i + 1 < im.size(); ++i)
                changed |= next.insert(im.substr(i, 2)).second;
        }
        pairs = std::move(next);
    }
    return {pairs.begin(), pairs.end()};
}

std::vector<std::string> SubstitutionSystem::language_words(int length, int max_length) const {
    if (length < 1) throw config_error("language_words: length must be >= 1");
    if (length > max_length)
        throw config_error("language_words: length " + std::to_string(length) +
                           " exceeds configured maximum " + std::to_string(max_length));
    if (length == 1) {
        // primitivity: every symbol occurs
        std::vector<std::string> out;
        for (char c : alphabet_) out.emplace_back(1, c);
        return out;
    }
    // rounds until the shortest letter image reaches `length`
    std::vector<std::size_t> len(alphabet_.size(), 1);
    int rounds = 0;
    auto min_len = [&] { return *std::min_element(len.begin(), len.end()); };
    while (min_len() < static_cast<std::size_t>(length)) {
        std::vector<std::size_t> next(alphabet_.size(), 0);
        for (std::size_t i = 0; i < alphabet_.size(); ++i)
            for (char c : rules_[i]) next[i] += len[alphabet_.find(c)];
        len = std::move(next);
        ++rounds;
        if (rounds > 64) throw config_error("language_words: image growth stalled");
    }
    // every factor of the subshift of this length sits inside sigma^rounds(uv)
    // for some legal pair uv
    std::set<std::string> words;
    for (const auto& uv : legal_pairs()) {
        const std::string im = apply_rules(uv, rounds);
        for (std::size_t i = 0; i + static_cast<std::size_t>(length) <= im.size(); ++i)
            words.insert(im.substr(i, static_cast<std::size_t>(length)));
    }
    return {words.begin(), words.end()};
}

bool in_entourage(const SubstitutionSystem& sys, const Entourage& eps, SymbolicPoint x,
                  SymbolicPoint y) {
    if (eps.kind != Entourage::Kind::cylinder)
        throw config_error("in_entourage: symbolic points take cylinder entourages");
    return sys.word_at(x, eps.depth) == sys.word_at(y, eps.depth);
}

std::string SequenceSystem::word_at(i64 offset, int k) const {
    std::string w;
    w.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) w += at(offset + i);
    return w;
}

// ---------------------------------------------------------------------------
// Torus actions
// ---------------------------------------------------------------------------

TorusZdAction TorusZdAction::product_of_rotations(const std::vector<RotationSystem>& rotations,
                                                  std::string name) {
    TorusZdAction a;
    a.d = static_cast<int>(rotations.size());
    a.m = a.d;
    a.generators.assign(static_cast<std::size_t>(a.d),
                        std::vector<CirclePoint>(static_cast<std::size_t>(a.m), CirclePoint{0}));
    a.generator_error.resize(static_cast<std::size_t>(a.d));
    for (int j = 0; j < a.d; ++j) {
        a.generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] =
            rotations[static_cast<std::size_t>(j)].alpha;
        a.generator_error[static_cast<std::size_t>(j)] =
            rotations[static_cast<std::size_t>(j)].alpha_error;
    }
    a.name = name.empty() ? "torus_action(d=" + std::to_string(a.d) + ")" : std::move(name);
    return a;
}

TorusPoint TorusZdAction::act(const std::vector<i64>& n, const TorusPoint& x) const {
    if (static_cast<int>(n.size()) != d || static_cast<int>(x.size()) != m)
        throw config_error("torus act: dimension mismatch");
    TorusPoint y = x;
    for (int j = 0; j < d; ++j)
        for (int c = 0; c < m; ++c)
            y[static_cast<std::size_t>(c)] =
                y[static_cast<std::size_t>(c)] +
                generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)].scaled(
                    n[static_cast<std::size_t>(j)]);
    return y;
}

bool TorusZdAction::axis_aligned() const {
    if (d != m) return false;
    for (int j = 0; j < d; ++j)
        for (int c = 0; c < m; ++c)
            if (j != c && generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)].frac != 0)
                return false;
    return true;
}

double TorusZdAction::per_step_error(const std::vector<i64>& n) const {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
        const double steps = static_cast<double>(n[static_cast<std::size_t>(j)] < 0
                                                     ? -n[static_cast<std::size_t>(j)]
                                                     : n[static_cast<std::size_t>(j)]);
        acc += steps * (generator_error[static_cast<std::size_t>(j)] + kTick);
    }
    return acc;
}

bool in_entourage(const Entourage& eps, const TorusPoint& x, const TorusPoint& y) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("in_entourage: torus points take metric balls");
    if (x.size() != y.size()) throw config_error("in_entourage: torus dimension mismatch");
    // max metric: every coordinate strictly inside
    for (std::size_t c = 0; c < x.size(); ++c)
        if (circ_dist_ticks(x[c], y[c]) >= eps.radius_ticks) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Annulus twist
// ---------------------------------------------------------------------------

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AnnulusSystem AnnulusSystem::standard(double alpha, std::string name) {
    if (!(alpha > 0.0)) throw config_error("annulus: alpha must be > 0");
    AnnulusSystem s;
    s.alpha = alpha;
    s.name = name.empty() ? "annulus" : std::move(name);
    return s;
}

double AnnulusSystem::gamma(i64 n) const {
    const auto it = gamma_override.find(n);
    if (it != gamma_override.end())
        return static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
    return static_cast<double>(n) / static_cast<double>(n + 1);
}

double AnnulusSystem::radius_of(i64 circle) const {
    if (circle == 0) return (1.0 + alpha) * std::numbers::pi;
    return (1.0 + alpha + gamma(circle) / static_cast<double>(circle)) * std::numbers::pi;
}

AnnulusPoint AnnulusSystem::iterate(AnnulusPoint p, i64 n) const {
    const double r = radius_of(p.circle);
    double theta = std::fmod(p.theta + static_cast<double>(n) * r, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    return AnnulusPoint{p.circle, theta};
}

double AnnulusSystem::equicontinuity_defect(i64 n, double theta) const {
    if (n < 1) throw config_error("equicontinuity_defect: n must be >= 1");
    const double r_inner = radius_of(0);
    const double r_outer = radius_of(2 * n);
    double a = theta, b = theta;
    for (i64 k = 0; k < 2 * n; ++k) {
        a += r_inner;
        if (a >= kTwoPi) a -= kTwoPi;
        if (a >= kTwoPi) a -= kTwoPi;
        b += r_outer;
        if (b >= kTwoPi) b -= kTwoPi;
        if (b >= kTwoPi) b -= kTwoPi;
    }
    return circ_angle_dist(a, b);
}

bool in_entourage(const AnnulusSystem& sys, const Entourage& eps, const AnnulusPoint& x,
                  const AnnulusPoint& y) {
    if (eps.kind != Entourage::Kind::ball)
        throw config_error("in_entourage: annulus points take metric balls");
    // product metric: max of radial distance and circular angular distance
    const double dr = std::abs(sys.radius_of(x.circle) - sys.radius_of(y.circle));
    const double da = circ_angle_dist(x.theta, y.theta);
    return std::max(dr, da) < eps.radius;
}

double circ_angle_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

}  // namespace recur
