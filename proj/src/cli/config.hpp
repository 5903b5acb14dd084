#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "recur/systems.hpp"

// JSON experiment configuration: strict schema, unknown fields rejected.
namespace recur::cli {

using nlohmann::json;

struct FlowSpec {
    double vx = 1.0, vy = 0.0;
    bool normalize = false;
    std::string name;
};

struct SystemSpec {
    enum class Kind { rotation, subshift, torus, flow, annulus, sequence };
    Kind kind = Kind::rotation;

    // rotation / torus axes
    std::vector<RotationSystem> rotations;

    // subshift
    std::string alphabet;
    std::map<char, std::string> rules;

    FlowSpec flow;

    // annulus
    double annulus_alpha = 0.0;
    std::map<i64, std::pair<i64, i64>> gammas;

    // sequence
    std::string seq_prefix;
    char seq_fill = '0';

    std::string name;
};

struct SyntheticSetSpec {
    enum class Kind { coset, explicit_times };
    Kind kind = Kind::coset;
    i64 modulus = 1;
    i64 residue = 0;
    std::vector<i64> times;
    std::string label;
};

struct BoundConfig {
    SystemSpec system;
    Entourage entourage{};
    double certificate_radius = 0.0;  // metric systems
    std::optional<std::string> certificate_path;
    int grid_points = 0;
    i64 window = 0;
    std::vector<double> window_ladder;  // flow
    i64 horizon = 0;
    std::vector<i64> box_sides;  // torus
    std::vector<i64> horizons;   // torus per-dim
    i64 k_max = 100000;
    int workers = 0;  // 0 = default
    std::uint64_t seed = 1;
};

struct DensityConfig {
    bool synthetic = false;
    SystemSpec system;
    Entourage entourage{};
    SyntheticSetSpec set;
    std::vector<i64> window_ladder{100, 1000, 10000, 100000};
    i64 horizon = 100000;
    int workers = 0;
};

struct FolnerConfig {
    enum class Mode { defect, doubling, syndetic, ap };
    Mode mode = Mode::defect;
    // defect
    int d = 1;
    std::vector<i64> sides_ladder;
    std::vector<i64> translate;
    // doubling
    std::vector<i64> corner, sides;
    std::vector<std::vector<i64>> shifts;
    // syndetic
    std::vector<i64> moduli, residues;
    std::vector<std::vector<i64>> witness_k;
    std::vector<i64> cube_sides;
    i64 region_side = 0;
    // ap: visit-set source plus a ladder of box sizes
    bool ap_synthetic = true;
    SyntheticSetSpec ap_set;
    SystemSpec ap_system;
    Entourage ap_entourage{};
    std::vector<i64> ap_ladder;
    i64 ap_region = 0;
};

struct ProbeConfig {
    SystemSpec system;
    i64 n_max = 1000;
    double theta = 0.0;
};

json parse_document(const std::string& text);  // config_error carries line/column

BoundConfig parse_bound_config(const json& j);
DensityConfig parse_density_config(const json& j);
FolnerConfig parse_folner_config(const json& j);
ProbeConfig parse_probe_config(const json& j);

// Materialized system handles.
RotationSystem make_rotation(const SystemSpec& spec);
SubstitutionSystem make_subshift(const SystemSpec& spec);
TorusZdAction make_torus(const SystemSpec& spec);
AnnulusSystem make_annulus(const SystemSpec& spec);
SequenceSystem make_sequence(const SystemSpec& spec);

std::string config_digest(const json& j);

}  // namespace recur::cli
