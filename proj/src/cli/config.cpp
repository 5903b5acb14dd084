#include "config.hpp"

#include <cmath>

#include "recur/flow.hpp"
#include "recur/report.hpp"

namespace recur::cli {

namespace {

// Reject unknown fields so configs stay replayable across versions.
void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& ctx) {
    if (!j.is_object()) throw config_error(ctx + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const auto& a : allowed) ok = ok || key == a;
        if (!ok) throw config_error(ctx + ": unknown field \"" + key + "\"");
    }
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
    const auto it = j.find(key);
    if (it == j.end()) throw config_error(ctx + ": missing field \"" + key + "\"");
    return *it;
}

i64 get_int(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number_integer()) throw config_error(ctx + "." + key + ": expected an integer");
    return v.get<i64>();
}

i64 get_int_or(const json& j, const std::string& key, i64 fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->get<i64>();
}

double get_num(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) throw config_error(ctx + "." + key + ": expected a number");
    return v.get<double>();
}

RotationSystem rotation_from_alpha(const json& v, const std::string& name,
                                   const std::string& ctx) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "golden" || s == "golden_conjugate") {
            auto r = RotationSystem::golden();
            if (!name.empty()) r.name = name;
            return r;
        }
        throw config_error(ctx + ": unknown named angle \"" + s + "\"");
    }
    if (v.is_object()) {
        check_keys(v, {"rational"}, ctx);
        const json& pq = require(v, "rational", ctx);
        if (!pq.is_array() || pq.size() != 2)
            throw config_error(ctx + ".rational: expected [p, q]");
        return RotationSystem::from_rational(pq[0].get<i64>(), pq[1].get<i64>(), name);
    }
    if (v.is_number()) return RotationSystem::from_double(v.get<double>(), name);
    throw config_error(ctx + ": expected \"golden\", a number, or {\"rational\":[p,q]}");
}

SystemSpec parse_system(const json& j) {
    const std::string ctx = "system";
    const std::string kind = require(j, "kind", ctx).get<std::string>();
    SystemSpec spec;
    spec.name = j.contains("name") ? j["name"].get<std::string>() : "";
    if (kind == "rotation") {
        check_keys(j, {"kind", "alpha", "name"}, ctx);
        spec.kind = SystemSpec::Kind::rotation;
        spec.rotations.push_back(rotation_from_alpha(require(j, "alpha", ctx), spec.name, ctx));
    } else if (kind == "subshift") {
        check_keys(j, {"kind", "alphabet", "rules", "name"}, ctx);
        spec.kind = SystemSpec::Kind::subshift;
        spec.alphabet = require(j, "alphabet", ctx).get<std::string>();
        const json& rules = require(j, "rules", ctx);
        for (const auto& [sym, image] : rules.items()) {
            if (sym.size() != 1) throw config_error(ctx + ".rules: keys must be single symbols");
            spec.rules[sym[0]] = image.get<std::string>();
        }
    } else if (kind == "torus") {
        check_keys(j, {"kind", "alphas", "name"}, ctx);
        spec.kind = SystemSpec::Kind::torus;
        const json& alphas = require(j, "alphas", ctx);
        if (!alphas.is_array() || alphas.empty())
            throw config_error(ctx + ".alphas: expected a nonempty array");
        int axis = 0;
        for (const auto& a : alphas)
            spec.rotations.push_back(
                rotation_from_alpha(a, "axis" + std::to_string(axis++), ctx + ".alphas"));
    } else if (kind == "flow") {
        check_keys(j, {"kind", "v", "normalize", "name"}, ctx);
        spec.kind = SystemSpec::Kind::flow;
        const json& v = require(j, "v", ctx);
        if (!v.is_array() || v.size() != 2) throw config_error(ctx + ".v: expected [vx, vy]");
        auto comp = [&](const json& c) -> double {
            if (c.is_string()) {
                const auto s = c.get<std::string>();
                if (s == "golden" || s == "golden_conjugate")
                    return unit_from_ticks(golden_conjugate_ticks());
                throw config_error(ctx + ".v: unknown named component \"" + s + "\"");
            }
            return c.get<double>();
        };
        spec.flow.vx = comp(v[0]);
        spec.flow.vy = comp(v[1]);
        spec.flow.normalize = j.contains("normalize") && j["normalize"].get<bool>();
        spec.flow.name = spec.name;
    } else if (kind == "annulus") {
        check_keys(j, {"kind", "alpha", "gammas", "name"}, ctx);
        spec.kind = SystemSpec::Kind::annulus;
        spec.annulus_alpha = get_num(j, "alpha", ctx);
        if (j.contains("gammas")) {
            for (const auto& [n, pq] : j["gammas"].items()) {
                if (!pq.is_array() || pq.size() != 2)
                    throw config_error(ctx + ".gammas: values must be [p, q]");
                spec.gammas[std::stoll(n)] = {pq[0].get<i64>(), pq[1].get<i64>()};
            }
        }
    } else if (kind == "sequence") {
        check_keys(j, {"kind", "prefix", "fill", "name"}, ctx);
        spec.kind = SystemSpec::Kind::sequence;
        spec.seq_prefix = require(j, "prefix", ctx).get<std::string>();
        const auto fill = require(j, "fill", ctx).get<std::string>();
        if (fill.size() != 1) throw config_error(ctx + ".fill: expected a single symbol");
        spec.seq_fill = fill[0];
    } else {
        throw config_error(ctx + ": unknown kind \"" + kind + "\"");
    }
    return spec;
}

Entourage parse_entourage(const json& j) {
    check_keys(j, {"radius", "depth"}, "entourage");
    if (j.contains("radius") == j.contains("depth"))
        throw config_error("entourage: exactly one of radius/depth required");
    if (j.contains("radius")) return Entourage::ball(j["radius"].get<double>());
    return Entourage::cylinder(j["depth"].get<int>());
}

void check_version(const json& j, const std::string& ctx) {
    if (get_int(j, "version", ctx) != 1) throw config_error(ctx + ": unsupported version");
}

std::vector<i64> int_array(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw config_error(ctx + ": expected an array");
    std::vector<i64> out;
    for (const auto& e : v) out.push_back(e.get<i64>());
    return out;
}

std::vector<std::vector<i64>> int_matrix(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw config_error(ctx + ": expected an array of arrays");
    std::vector<std::vector<i64>> out;
    for (const auto& e : v) out.push_back(int_array(e, ctx));
    return out;
}

SyntheticSetSpec parse_synthetic_set(const json& set, const std::string& ctx) {
    check_keys(set, {"coset", "explicit"}, ctx);
    SyntheticSetSpec out;
    if (set.contains("coset")) {
        const json& co = set["coset"];
        check_keys(co, {"modulus", "residue"}, ctx + ".coset");
        out.kind = SyntheticSetSpec::Kind::coset;
        out.modulus = get_int(co, "modulus", ctx);
        out.residue = get_int_or(co, "residue", 0);
        out.label = "coset(" + std::to_string(out.residue) + " mod " +
                    std::to_string(out.modulus) + ")";
    } else if (set.contains("explicit")) {
        out.kind = SyntheticSetSpec::Kind::explicit_times;
        out.times = int_array(set["explicit"], ctx + ".explicit");
        out.label = "explicit(" + std::to_string(out.times.size()) + ")";
    } else {
        throw config_error(ctx + ": coset or explicit required");
    }
    return out;
}

}  // namespace

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into line/column
        int line = 1, col = 1;
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw config_error("config: " + std::string(e.what()) + " at line " +
                               std::to_string(line) + " column " + std::to_string(col),
                           line, col);
    }
}

BoundConfig parse_bound_config(const json& j) {
    const std::string ctx = "bound";
    check_keys(j,
               {"version", "system", "entourage", "certificate", "grid", "window", "window_ladder",
                "horizon", "box_sides", "horizons", "k_max", "workers", "seed"},
               ctx);
    check_version(j, ctx);
    BoundConfig c;
    c.system = parse_system(require(j, "system", ctx));
    c.entourage = parse_entourage(require(j, "entourage", ctx));
    if (j.contains("certificate")) {
        const json& cert = j["certificate"];
        check_keys(cert, {"radius", "depth", "path"}, ctx + ".certificate");
        if (cert.contains("radius")) c.certificate_radius = cert["radius"].get<double>();
        if (cert.contains("path")) c.certificate_path = cert["path"].get<std::string>();
    }
    if (j.contains("grid")) {
        check_keys(j["grid"], {"points"}, ctx + ".grid");
        c.grid_points = static_cast<int>(get_int(j["grid"], "points", ctx + ".grid"));
    }
    if (j.contains("window")) c.window = j["window"].get<i64>();
    if (j.contains("window_ladder"))
        for (const auto& w : j["window_ladder"]) c.window_ladder.push_back(w.get<double>());
    if (j.contains("horizon")) c.horizon = j["horizon"].get<i64>();
    if (j.contains("box_sides")) c.box_sides = int_array(j["box_sides"], ctx + ".box_sides");
    if (j.contains("horizons")) c.horizons = int_array(j["horizons"], ctx + ".horizons");
    c.k_max = get_int_or(j, "k_max", 100000);
    c.workers = static_cast<int>(get_int_or(j, "workers", 0));
    c.seed = static_cast<std::uint64_t>(get_int_or(j, "seed", 1));
    return c;
}

DensityConfig parse_density_config(const json& j) {
    const std::string ctx = "density";
    check_keys(j, {"version", "source", "window_ladder", "horizon", "workers"}, ctx);
    check_version(j, ctx);
    DensityConfig c;
    const json& src = require(j, "source", ctx);
    const std::string kind = require(src, "kind", ctx + ".source").get<std::string>();
    if (kind == "system") {
        check_keys(src, {"kind", "system", "entourage"}, ctx + ".source");
        c.synthetic = false;
        c.system = parse_system(require(src, "system", ctx + ".source"));
        c.entourage = parse_entourage(require(src, "entourage", ctx + ".source"));
    } else if (kind == "synthetic") {
        check_keys(src, {"kind", "set"}, ctx + ".source");
        c.synthetic = true;
        c.set = parse_synthetic_set(require(src, "set", ctx + ".source"), ctx + ".source.set");
    } else {
        throw config_error(ctx + ".source: unknown kind \"" + kind + "\"");
    }
    if (j.contains("window_ladder"))
        c.window_ladder = int_array(j["window_ladder"], ctx + ".window_ladder");
    c.horizon = get_int_or(j, "horizon", 100000);
    c.workers = static_cast<int>(get_int_or(j, "workers", 0));
    return c;
}

FolnerConfig parse_folner_config(const json& j) {
    const std::string ctx = "folner";
    check_keys(j, {"version", "mode", "defect", "doubling", "syndetic", "ap"}, ctx);
    check_version(j, ctx);
    FolnerConfig c;
    const std::string mode = require(j, "mode", ctx).get<std::string>();
    if (mode == "defect") {
        c.mode = FolnerConfig::Mode::defect;
        const json& d = require(j, "defect", ctx);
        check_keys(d, {"d", "sides", "t"}, ctx + ".defect");
        c.d = static_cast<int>(get_int(d, "d", ctx));
        c.sides_ladder = int_array(require(d, "sides", ctx), ctx + ".defect.sides");
        c.translate = int_array(require(d, "t", ctx), ctx + ".defect.t");
    } else if (mode == "doubling") {
        c.mode = FolnerConfig::Mode::doubling;
        const json& d = require(j, "doubling", ctx);
        check_keys(d, {"corner", "sides", "shifts"}, ctx + ".doubling");
        c.corner = int_array(require(d, "corner", ctx), ctx);
        c.sides = int_array(require(d, "sides", ctx), ctx);
        c.shifts = int_matrix(require(d, "shifts", ctx), ctx);
    } else if (mode == "syndetic") {
        c.mode = FolnerConfig::Mode::syndetic;
        const json& d = require(j, "syndetic", ctx);
        check_keys(d, {"moduli", "residues", "k", "cube_sides", "region_side"}, ctx + ".syndetic");
        c.moduli = int_array(require(d, "moduli", ctx), ctx);
        c.residues = j["syndetic"].contains("residues")
                         ? int_array(d["residues"], ctx)
                         : std::vector<i64>(c.moduli.size(), 0);
        c.witness_k = int_matrix(require(d, "k", ctx), ctx);
        c.cube_sides = int_array(require(d, "cube_sides", ctx), ctx);
        c.region_side = get_int(d, "region_side", ctx);
    } else if (mode == "ap") {
        c.mode = FolnerConfig::Mode::ap;
        const json& d = require(j, "ap", ctx);
        check_keys(d, {"set", "system", "entourage", "ladder", "region"}, ctx + ".ap");
        if (d.contains("set") == d.contains("system"))
            throw config_error(ctx + ".ap: exactly one of set/system required");
        if (d.contains("set")) {
            c.ap_synthetic = true;
            c.ap_set = parse_synthetic_set(d["set"], ctx + ".ap.set");
        } else {
            c.ap_synthetic = false;
            c.ap_system = parse_system(d["system"]);
            c.ap_entourage = parse_entourage(require(d, "entourage", ctx + ".ap"));
        }
        c.ap_ladder = int_array(require(d, "ladder", ctx), ctx + ".ap.ladder");
        c.ap_region = get_int(d, "region", ctx);
    } else {
        throw config_error(ctx + ": unknown mode \"" + mode + "\"");
    }
    return c;
}

ProbeConfig parse_probe_config(const json& j) {
    const std::string ctx = "probe";
    check_keys(j, {"version", "system", "n_max", "theta"}, ctx);
    check_version(j, ctx);
    ProbeConfig c;
    c.system = parse_system(require(j, "system", ctx));
    if (c.system.kind != SystemSpec::Kind::annulus)
        throw config_error(ctx + ": probe requires an annulus system");
    c.n_max = get_int_or(j, "n_max", 1000);
    c.theta = j.contains("theta") ? j["theta"].get<double>() : 0.0;
    return c;
}

RotationSystem make_rotation(const SystemSpec& spec) {
    if (spec.kind != SystemSpec::Kind::rotation || spec.rotations.size() != 1)
        throw config_error("expected a rotation system");
    return spec.rotations[0];
}

SubstitutionSystem make_subshift(const SystemSpec& spec) {
    if (spec.kind != SystemSpec::Kind::subshift) throw config_error("expected a subshift system");
    return SubstitutionSystem(spec.alphabet, spec.rules,
                              spec.name.empty() ? "subshift" : spec.name);
}

TorusZdAction make_torus(const SystemSpec& spec) {
    if (spec.kind != SystemSpec::Kind::torus) throw config_error("expected a torus system");
    return TorusZdAction::product_of_rotations(spec.rotations,
                                               spec.name.empty() ? "" : spec.name);
}

AnnulusSystem make_annulus(const SystemSpec& spec) {
    if (spec.kind != SystemSpec::Kind::annulus) throw config_error("expected an annulus system");
    auto sys = AnnulusSystem::standard(spec.annulus_alpha,
                                       spec.name.empty() ? "annulus" : spec.name);
    sys.gamma_override = spec.gammas;
    return sys;
}

SequenceSystem make_sequence(const SystemSpec& spec) {
    if (spec.kind != SystemSpec::Kind::sequence) throw config_error("expected a sequence system");
    SequenceSystem s;
    s.prefix = spec.seq_prefix;
    s.fill = spec.seq_fill;
    s.name = spec.name.empty() ? "sequence" : spec.name;
    return s;
}

std::string config_digest(const json& j) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

}  // namespace recur::cli
