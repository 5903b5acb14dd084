#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "recur/report.hpp"
#include "recur/returns.hpp"
#include "recur/systems.hpp"

// Constructive covering constants: the smallest K such that every orbit
// segment of length K+1 meets every entourage neighborhood, with
// machine-checkable evidence, and the certified frequency bound 1/(K+1).
namespace recur {

// Rotation evidence: the sorted orbit {k*alpha : 0 <= k <= K} and its
// largest circular gap, plus the witness gap showing K-1 fails.
struct RotationCoveringEvidence {
    std::vector<u64> orbit_sorted;
    u64 max_gap_ticks = 0;
    u64 witness_gap_prev = 0;  // max gap at K-1 (>= 2r); 0 when K == 0
};

// Subshift evidence: the repetitivity radius K + depth, the full word and
// cylinder lists, and a witness word of length K-1+depth missing a factor.
struct SubshiftCoveringEvidence {
    int depth = 0;
    std::vector<std::string> cylinder_words;
    std::string witness_word_prev;     // empty when K == 0
    std::string witness_missing_word;  // the depth-word it misses
};

// Torus evidence: the density of the orbit prefix was certified on a grid
// with a Lipschitz margin of half a cell.
struct TorusCoveringEvidence {
    int grid_resolution = 0;
    double worst_min_distance = 0.0;       // max over grid of min distance at K
    double worst_min_distance_prev = 0.0;  // same at K-1 (fails the margin test)
};

struct CoveringCertificate {
    std::string system;
    std::uint64_t system_hash = 0;
    Entourage epsilon;
    i64 covering_k = 0;
    double slack = 0.0;  // radius margin left after the error budget
    std::variant<RotationCoveringEvidence, SubshiftCoveringEvidence, TorusCoveringEvidence>
        evidence;

    std::uint64_t evidence_digest() const;
    CertificateSummary summary() const;
};

inline constexpr i64 kDefaultKMax = 100000;

// Smallest K with max circular gap of {k*alpha : 0 <= k <= K} < 2*radius;
// then every orbit segment of length K+1 of any point meets every open
// radius-ball. Refuses when the orbit closes (rational alpha) before the
// gap condition holds, or when K_max / the error budget is exhausted.
CoveringCertificate rotation_covering_K(const RotationSystem& sys, const Entourage& eps,
                                        i64 k_max = kDefaultKMax);

// Smallest K such that every factor of length K+depth contains every legal
// depth-word; every orbit segment of length K+1 then enters every depth
// cylinder.
CoveringCertificate subshift_covering_K(const SubstitutionSystem& sys, const Entourage& eps,
                                        i64 k_max = kDefaultKMax);

// Smallest K (certified on a grid with Lipschitz slack) such that the orbit
// prefix {k*step : 0 <= k <= K} of a torus translation is radius-dense in
// the max metric. Used by the continuous-time skeleton and by Z^d products.
CoveringCertificate torus_covering_K(const std::vector<CirclePoint>& step, double step_error,
                                     const Entourage& eps, i64 k_max = kDefaultKMax,
                                     const std::string& name = "torus_step");

// The uniform frequency bound 1/(K+1) implied by a certificate.
inline Rational certified_bound(const CoveringCertificate& cert) {
    return Rational::make(1, cert.covering_k + 1);
}

// Windowed verification of the uniform bound over a grid of base points.
// Metric systems need a certificate at radius <= eps.radius/3 and compare
// against 1/(K+1) - 1/W; cylinder entourages partition the space, need the
// certificate at the same depth, and compare against 1/(K+1) itself.
DensityReport verify_uniform_bound(const RotationSystem& sys, const Entourage& eps,
                                   int grid_points, i64 window_length, i64 horizon,
                                   const CoveringCertificate& cert, int workers = 1);

DensityReport verify_uniform_bound(const SubstitutionSystem& sys, const Entourage& eps,
                                   i64 window_length, i64 horizon,
                                   const CoveringCertificate& cert, int workers = 1);

// Soundness spot check: for `samples` seeded random start points y and every
// grid base point x, some k <= K lands f^k(y) inside eps[x]. Returns the
// number of (y, x) pairs tested; throws covering_error on a miss.
std::size_t spot_check_certificate(const RotationSystem& sys, const CoveringCertificate& cert,
                                   int grid_points, int samples, std::uint64_t seed);

}  // namespace recur
