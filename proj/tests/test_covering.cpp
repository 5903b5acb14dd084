#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "recur/covering.hpp"

using namespace recur;

namespace {

// independent oracle: smallest K with max circular gap of {k*alpha} < 2r,
// computed by sorting long-double orbit points
i64 rotation_k_brute(long double alpha, double radius, i64 k_max) {
    std::vector<long double> pts;
    long double pos = 0.0L;
    for (i64 k = 0; k <= k_max; ++k) {
        pts.push_back(pos);
        std::vector<long double> sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        long double max_gap = 1.0L - sorted.back() + sorted.front();
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
            max_gap = std::max(max_gap, sorted[i + 1] - sorted[i]);
        if (sorted.size() == 1) max_gap = 1.0L;
        if (max_gap < 2.0L * static_cast<long double>(radius)) return k;
        pos += alpha;
        if (pos >= 1.0L) pos -= 1.0L;
    }
    return -1;
}

const long double kGolden = (sqrtl(5.0L) - 1.0L) / 2.0L;

SubstitutionSystem fibonacci() {
    return SubstitutionSystem("01", {{'0', "01"}, {'1', "0"}}, "fibonacci");
}

SubstitutionSystem thue_morse() {
    return SubstitutionSystem("01", {{'0', "01"}, {'1', "10"}}, "thue-morse");
}

// independent oracle: smallest K such that every window of length K+depth of
// a long prefix contains every depth-word of the same prefix
i64 subshift_k_brute(const SubstitutionSystem& sys, int depth, i64 k_max) {
    const std::string fp = sys.fixed_point_prefix(1 << 16);
    std::set<std::string> depth_words;
    for (std::size_t i = 0; i + static_cast<std::size_t>(depth) <= fp.size(); ++i)
        depth_words.insert(fp.substr(i, static_cast<std::size_t>(depth)));
    for (i64 K = 0; K <= k_max; ++K) {
        const std::size_t L = static_cast<std::size_t>(K + depth);
        bool ok = true;
        for (std::size_t i = 0; ok && i + L <= fp.size(); ++i) {
            const std::string w = fp.substr(i, L);
            for (const auto& u : depth_words)
                if (w.find(u) == std::string::npos) {
                    ok = false;
                    break;
                }
        }
        if (ok) return K;
    }
    return -1;
}

}  // namespace

TEST_CASE("golden rotation covering at radius 0.3: K = 2") {
    const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.3));
    CHECK(cert.covering_k == 2);
    const auto& ev = std::get<RotationCoveringEvidence>(cert.evidence);
    CHECK(ev.orbit_sorted.size() == 3);
    CHECK(unit_from_ticks(ev.max_gap_ticks) == doctest::Approx(0.381966).epsilon(1e-5));
    CHECK(unit_from_ticks(ev.witness_gap_prev) == doctest::Approx(0.618034).epsilon(1e-5));
    CHECK(cert.slack > 0.0);
}

TEST_CASE("radius above one half covers with K = 0") {
    const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.6));
    CHECK(cert.covering_k == 0);
    CHECK(certified_bound(cert) == Rational::make(1, 1));
}

TEST_CASE("strict boundary at radius exactly one half") {
    // a single open half-circle ball misses its antipode, so K > 0
    const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.5));
    CHECK(cert.covering_k == 1);
}

TEST_CASE("rotation covering matches the brute-force gap oracle") {
    for (double radius : {0.3, 0.15, 0.05, 0.02}) {
        const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(radius));
        CHECK(cert.covering_k == rotation_k_brute(kGolden, radius, 2000));
    }
}

TEST_CASE("rational rotation refuses when the orbit closes too sparse") {
    const auto sys = RotationSystem::from_rational(1, 3);
    CHECK_THROWS_AS(rotation_covering_K(sys, Entourage::ball(0.05)), covering_error);
    // but succeeds when three points are enough
    const auto cert = rotation_covering_K(sys, Entourage::ball(0.2));
    CHECK(cert.covering_k == 2);
}

TEST_CASE("covering K is monotone in the entourage") {
    const auto sys = RotationSystem::golden();
    i64 prev = -1;
    for (double radius : {0.4, 0.2, 0.1, 0.05}) {
        const auto cert = rotation_covering_K(sys, Entourage::ball(radius));
        CHECK(cert.covering_k >= prev);
        prev = cert.covering_k;
    }
    const auto fib = fibonacci();
    const auto k1 = subshift_covering_K(fib, Entourage::cylinder(1)).covering_k;
    const auto k3 = subshift_covering_K(fib, Entourage::cylinder(3)).covering_k;
    CHECK(k3 >= k1);
}

TEST_CASE("rotation covering minimality: the stored witness gap fails at K-1") {
    const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.05));
    const auto& ev = std::get<RotationCoveringEvidence>(cert.evidence);
    CHECK(static_cast<u128>(ev.witness_gap_prev) >=
          2 * static_cast<u128>(cert.epsilon.radius_ticks));
    CHECK(static_cast<u128>(ev.max_gap_ticks) < 2 * static_cast<u128>(cert.epsilon.radius_ticks));
}

TEST_CASE("fibonacci depth-1 covering: K = 2") {
    const auto cert = subshift_covering_K(fibonacci(), Entourage::cylinder(1));
    CHECK(cert.covering_k == 2);
    const auto& ev = std::get<SubshiftCoveringEvidence>(cert.evidence);
    CHECK(ev.witness_word_prev == "00");  // length-2 word missing "1"
    CHECK(ev.witness_missing_word == "1");
}

TEST_CASE("subshift covering matches the long-prefix oracle") {
    const auto fib = fibonacci();
    const auto tm = thue_morse();
    for (int depth = 1; depth <= 4; ++depth) {
        CHECK(subshift_covering_K(fib, Entourage::cylinder(depth)).covering_k ==
              subshift_k_brute(fib, depth, 200));
        CHECK(subshift_covering_K(tm, Entourage::cylinder(depth)).covering_k ==
              subshift_k_brute(tm, depth, 200));
    }
}

TEST_CASE("subshift covering refuses at the step cap and names a missing word") {
    try {
        subshift_covering_K(fibonacci(), Entourage::cylinder(3), 2);
        FAIL("expected a covering refusal");
    } catch (const covering_error& e) {
        const std::string what = e.what();
        CHECK(what.find("K_max") != std::string::npos);
        CHECK(what.find("missing") != std::string::npos);
    }
}

TEST_CASE("certified bounds are exact rationals") {
    const auto cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.3));
    CHECK(certified_bound(cert) == Rational::make(1, 3));
}

TEST_CASE("certificate soundness spot check (seeded)") {
    const auto sys = RotationSystem::golden();
    const auto cert = rotation_covering_K(sys, Entourage::ball(0.05));
    const auto checked = spot_check_certificate(sys, cert, 100, 1000, 42);
    CHECK(checked == 100000);
}

TEST_CASE("subshift certificate soundness: every window contains every cylinder word") {
    const auto sys = fibonacci();
    const auto cert = subshift_covering_K(sys, Entourage::cylinder(3));
    const auto words = sys.language_words(3);
    const std::string fp = sys.fixed_point_prefix(1 << 15);
    std::mt19937_64 rng(7);
    const std::size_t span = static_cast<std::size_t>(cert.covering_k) + 3;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t off = rng() % (fp.size() - span);
        const std::string window = fp.substr(off, span);
        for (const auto& u : words) CHECK(window.find(u) != std::string::npos);
    }
}

TEST_CASE("verify_uniform_bound: golden rotation, all margins nonnegative") {
    const auto sys = RotationSystem::golden();
    const auto eps = Entourage::ball(0.15);
    const auto cert = rotation_covering_K(sys, eps.third());
    const auto rep = verify_uniform_bound(sys, eps, 80, 1000, 10000, cert, 2);
    CHECK(rep.ok());
    CHECK(rep.rows.size() == 80);
    CHECK(rep.margin > 0.0);
    for (const auto& row : rep.rows) CHECK(row.margin >= 0.0);
}

TEST_CASE("verify_uniform_bound: refusal propagates from the certificate stage") {
    const auto sys = RotationSystem::from_rational(1, 3);
    CHECK_THROWS_AS(rotation_covering_K(sys, Entourage::ball(0.05)), covering_error);
}

TEST_CASE("verify_uniform_bound rejects mismatched certificates") {
    const auto sys = RotationSystem::golden();
    const auto eps = Entourage::ball(0.15);
    const auto too_wide = rotation_covering_K(sys, Entourage::ball(0.1));
    CHECK_THROWS_AS(verify_uniform_bound(sys, eps, 80, 1000, 10000, too_wide), config_error);
    const auto other = rotation_covering_K(RotationSystem::from_rational(1, 40), eps.third());
    CHECK_THROWS_AS(verify_uniform_bound(sys, eps, 80, 1000, 10000, other), config_error);
    const auto cert = rotation_covering_K(sys, eps.third());
    CHECK_THROWS_AS(verify_uniform_bound(sys, eps, 10, 1000, 10000, cert), config_error);
}

TEST_CASE("verify_uniform_bound: fibonacci cylinders, all margins nonnegative") {
    const auto sys = fibonacci();
    const auto eps = Entourage::cylinder(3);
    const auto cert = subshift_covering_K(sys, eps);
    const auto rep = verify_uniform_bound(sys, eps, 1000, 20000, cert, 2);
    CHECK(rep.ok());
    CHECK(rep.rows.size() == sys.language_words(3).size());
    for (const auto& row : rep.rows) {
        CHECK(row.frequency >= certified_bound(cert));
    }
}

TEST_CASE("torus covering: dense two-dimensional step") {
    const std::vector<CirclePoint> step{CirclePoint{golden_conjugate_ticks()},
                                        CirclePoint{ticks_from_unit(0.5411961001461969)}};
    const auto cert = torus_covering_K(step, 2 * kTick, Entourage::ball(0.3));
    CHECK(cert.covering_k > 0);
    const auto& ev = std::get<TorusCoveringEvidence>(cert.evidence);
    CHECK(ev.worst_min_distance < 0.3);
    CHECK(ev.worst_min_distance_prev >= 0.0);
    // soundness: sampled points of the torus have an orbit point within range
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const u64 x0 = rng(), x1 = rng();
        u64 p0 = 0, p1 = 0;
        bool hit = false;
        for (i64 k = 0; k <= cert.covering_k && !hit; ++k) {
            const u64 d = std::max(circ_dist_ticks(p0, x0), circ_dist_ticks(p1, x1));
            hit = d < cert.epsilon.radius_ticks;
            p0 += step[0].frac;
            p1 += step[1].frac;
        }
        CHECK(hit);
    }
}

TEST_CASE("torus covering refuses a rational (closed) step") {
    const std::vector<CirclePoint> step{CirclePoint{ticks_from_rational(1, 4, nullptr)},
                                        CirclePoint{ticks_from_rational(1, 2, nullptr)}};
    CHECK_THROWS_AS(torus_covering_K(step, 0.0, Entourage::ball(0.05), 1000), covering_error);
}

TEST_CASE("one-dimensional torus covering agrees with the rotation route") {
    const auto rot_cert = rotation_covering_K(RotationSystem::golden(), Entourage::ball(0.2));
    const std::vector<CirclePoint> step{CirclePoint{golden_conjugate_ticks()}};
    const auto torus_cert = torus_covering_K(step, kGoldenTickError, Entourage::ball(0.2));
    // the grid route is conservative: never smaller than the exact gap answer
    CHECK(torus_cert.covering_k >= rot_cert.covering_k);
    CHECK(torus_cert.covering_k <= rot_cert.covering_k + 8);
}
