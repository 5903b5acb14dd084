#pragma once

#include <string>
#include <vector>

#include "recur/rational.hpp"
#include "recur/report.hpp"
#include "recur/systems.hpp"

// Folner-box machinery for Z^d: defect ladders, the doubling and syndetic counting bounds
// behind the amenable uniform bound, box-Banach densities along translated
// boxes, and the almost-periodicity dichotomy.
namespace recur {

// box = corner + prod [0, sides_i)
struct FolnerBox {
    std::vector<i64> corner;
    std::vector<i64> sides;

    int dim() const { return static_cast<int>(sides.size()); }
    i64 volume() const;
    bool contains_box(const FolnerBox& inner) const;

    static FolnerBox cube(int d, i64 side, i64 corner_value = 0);
};

// |tF symdiff F| / |F| for a translate t, in closed form for boxes.
Rational folner_defect(const FolnerBox& box, const std::vector<i64>& t);

struct CoreDoublingResult {
    bool ok = false;                 // |F| <= 2 |intersection of h^-1 F|
    bool empty_intersection = false; // infinite-ratio sentinel
    i64 volume = 0;
    i64 intersection = 0;
    Rational ratio{0, 1};  // volume / intersection when nonempty
};

// Intersection over h in H of (F - h), a box in closed form.
CoreDoublingResult core_doubling_check(const FolnerBox& box, const std::vector<std::vector<i64>>& shifts);

// Smallest cube side n such that [0,n)^d passes core_doubling_check for the given
// per-dimension shift spreads, i.e. n^d <= 2 * prod(n - spread_i).
i64 core_doubling_threshold(const std::vector<i64>& spreads);

// Membership oracle for subsets of Z^d: lattice cosets (closed-form counts),
// explicit sorted 1-d visit sets, or products of explicit 1-d sets.
class SetOracle {
  public:
    static SetOracle coset(std::vector<i64> moduli, std::vector<i64> residues);
    static SetOracle explicit_1d(std::vector<i64> sorted_times);
    static SetOracle product(std::vector<std::vector<i64>> per_dim_sorted);

    int dim() const { return dim_; }
    bool contains(const std::vector<i64>& x) const;
    i64 count_in(const FolnerBox& box) const;
    std::string describe() const;

    // per-dimension longest empty stretch intersected with [lo, hi), with the
    // corner where it occurs (explicit sets; cosets use modulus - 1)
    i64 max_gap_in(int dim, i64 lo, i64 hi, i64* corner_out = nullptr) const;

  private:
    enum class Kind { coset, explicit1d, product };
    Kind kind_ = Kind::coset;
    int dim_ = 1;
    std::vector<i64> moduli_, residues_;
    std::vector<std::vector<i64>> times_;  // per dimension
};

struct SyndeticWitness {
    std::vector<std::vector<i64>> K;  // finite subset of Z^d
    FolnerBox region;                 // where (K + t) meets B was verified
};

// Exhaustive check of (K + t) intersect B != empty for every t in the region.
bool verify_syndetic(const SetOracle& B, const SyndeticWitness& witness);

struct SyndeticDensityReport {
    std::vector<Rational> frequencies;  // |B n F_n| / |F_n| per box
    i64 threshold_index = -1;           // first box passing the doubling check for the witness shifts
    Rational bound{0, 1};               // 1 / (2|K|)
    bool ok = false;                    // all frequencies past the threshold >= bound
    std::vector<std::string> violations;
};

SyndeticDensityReport syndetic_box_density(const SetOracle& B, const SyndeticWitness& witness,
                              const std::vector<FolnerBox>& boxes);

struct AmenableBoundOptions {
    std::vector<i64> box_sides;   // window box W (per dimension)
    std::vector<i64> horizon;     // scan region [0, horizon_j) per dimension
    int grid_points = 8;          // diagonal base points, reporting only
    i64 k_max = 100000;
    int workers = 1;
    double cover_radius = 0.0;    // 0 = use epsilon itself
};

// Uniform amenable bound for an axis-aligned torus Z^d translation action:
// covering exponent box from per-axis gap scans, bound 1/(2|K|), verified by
// the minimum visit frequency over all translated boxes in the horizon.
DensityReport amenable_uniform_bound(const TorusZdAction& action, const Entourage& eps,
                                     const AmenableBoundOptions& opt);

struct ApLadderEntry {
    i64 size = 0;
    bool empty_box_found = false;
    std::vector<i64> witness_corner;  // valid when empty_box_found
};

struct ApVerdict {
    bool ap_consistent = false;
    i64 max_gap = -1;  // meaningful for the AP-consistent verdict
    std::vector<ApLadderEntry> ladder;
};

// Dichotomy: NOT-AP when every ladder size admits a translated box fully in
// the complement of B (the complement is thick along boxes); otherwise
// AP-consistent with the max-gap syndetic bound.
ApVerdict ap_characterization(const SetOracle& B, const FolnerBox& region,
                              const std::vector<i64>& ladder_sizes);

}  // namespace recur
