#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "recur/amenable.hpp"
#include "recur/covering.hpp"
#include "recur/flow.hpp"
#include "recur/parallel.hpp"

namespace recur::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

json certificate_json(const CertificateSummary& s) {
    json j;
    j["system"] = s.system;
    j["system_hash"] = s.system_hash;
    j["epsilon"] = s.epsilon;
    j["K"] = s.covering_k;
    j["evidence_digest"] = s.evidence_digest;
    j["slack"] = s.slack;
    return j;
}

json report_json(const DensityReport& rep, const std::string& digest) {
    json j;
    j["version"] = 1;
    j["config_digest"] = digest;
    j["system"] = rep.system;
    j["epsilon"] = rep.epsilon;
    j["continuous"] = rep.continuous;
    j["window"] = rep.window_length;
    j["horizon"] = rep.horizon;
    j["certificate"] = certificate_json(rep.certificate);
    j["certified_bound"] = rep.certified_bound.str();
    j["certified_bound_value"] = rep.certified_bound_value;
    j["window_slack"] = rep.window_slack;
    j["min_measured"] = rep.min_measured;
    j["margin"] = rep.margin;
    j["violations"] = rep.violations;
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["point"] = r.point;
        row["count"] = r.count;
        row["max_gap"] = r.max_gap;
        row["frequency"] = r.exact ? json(r.frequency.str()) : json(r.frequency_value);
        row["frequency_value"] = r.frequency_value;
        row["argmin_start"] = r.argmin_start;
        row["margin"] = r.margin;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

int run_guarded(const CommandOptions& opt, const std::string& name,
                const std::function<int()>& body) {
    const auto t0 = Clock::now();
    int code;
    try {
        code = body();
    } catch (const config_error& e) {
        std::cerr << "{\"error\":\"config\",\"detail\":" << json(e.what()).dump() << "}\n";
        return kExitConfig;
    } catch (const budget_error& e) {
        std::cerr << "{\"error\":\"budget-refusal\",\"detail\":" << json(e.what()).dump() << "}\n";
        return kExitBudget;
    } catch (const covering_error& e) {
        std::cerr << "{\"error\":\"covering-refusal\",\"detail\":" << json(e.what()).dump()
                  << "}\n";
        return kExitCovering;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"io\",\"detail\":" << json(e.what()).dump() << "}\n";
        return kExitIo;
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    if (!opt.quiet) std::cerr << name << ": wall_ms=" << ms << " exit=" << code << "\n";
    return code;
}

int resolve_workers(int config_workers, const CommandOptions& opt) {
    if (opt.workers_override >= 1) return opt.workers_override;
    if (config_workers >= 1) return config_workers;
    return default_workers();
}

LinearFlow flow_from_spec(const FlowSpec& spec) {
    double vx = spec.vx, vy = spec.vy;
    if (spec.normalize) {
        const double s = std::hypot(vx, vy);
        if (!(s > 0)) throw config_error("flow: zero velocity cannot be normalized");
        vx /= s;
        vy /= s;
    }
    return LinearFlow::make(vx, vy, spec.name);
}

CoveringCertificate load_certificate(const std::string& path, std::uint64_t expect_hash,
                                     const Entourage& expect_eps) {
    const std::string text = read_text_file(path);
    const json j = parse_document(text);
    CoveringCertificate cert;
    cert.system = j.at("system").get<std::string>();
    cert.system_hash = j.at("system_hash").get<std::uint64_t>();
    cert.covering_k = j.at("K").get<i64>();
    cert.slack = j.at("slack").get<double>();
    if (cert.system_hash != expect_hash)
        throw config_error("certificate: stored system hash does not match this configuration");
    if (j.at("epsilon").get<std::string>() != expect_eps.str())
        throw config_error("certificate: stored epsilon does not match this configuration");
    cert.epsilon = expect_eps;
    return cert;
}

int finish_bound_report(const DensityReport& rep, const CertificateSummary& cert_summary,
                        const std::string& digest, const CommandOptions& opt) {
    write_text_file(opt.out_dir + "/report.json", report_json(rep, digest).dump(2) + "\n");
    write_text_file(opt.out_dir + "/report.csv", density_rows_csv(rep.rows));
    write_text_file(opt.out_dir + "/certificate.json", certificate_json(cert_summary).dump(2) + "\n");
    if (!opt.quiet)
        std::cerr << "bound: K=" << cert_summary.covering_k << " certified="
                  << rep.certified_bound.str() << " min_measured=" << rep.min_measured
                  << " margin=" << rep.margin << " violations=" << rep.violations.size() << "\n";
    return rep.ok() ? kExitOk : kExitViolation;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

int cmd_bound(const std::string& config_text, const CommandOptions& opt) {
    return run_guarded(opt, "bound", [&]() -> int {
        const json doc = parse_document(config_text);
        const BoundConfig cfg = parse_bound_config(doc);
        const std::string digest = config_digest(doc);
        ensure_out_dir(opt.out_dir);
        const int workers = resolve_workers(cfg.workers, opt);

        switch (cfg.system.kind) {
            case SystemSpec::Kind::rotation: {
                const auto sys = make_rotation(cfg.system);
                if (cfg.entourage.kind != Entourage::Kind::ball)
                    throw config_error("bound: rotation requires a ball entourage");
                const double cert_radius = cfg.certificate_radius > 0
                                               ? cfg.certificate_radius
                                               : cfg.entourage.radius / 3.0;
                CoveringCertificate cert;
                if (cfg.certificate_path && fs::exists(*cfg.certificate_path)) {
                    cert = load_certificate(*cfg.certificate_path,
                                            fnv1a64("rotation|alpha=" +
                                                    std::to_string(sys.alpha.frac) +
                                                    "|err=" + std::to_string(sys.alpha_error)),
                                            Entourage::ball(cert_radius));
                } else {
                    cert = rotation_covering_K(sys, Entourage::ball(cert_radius), cfg.k_max);
                    if (cfg.certificate_path)
                        write_text_file(*cfg.certificate_path,
                                        certificate_json(cert.summary()).dump(2) + "\n");
                }
                if (cfg.window <= 0 || cfg.horizon <= 0 || cfg.grid_points <= 0)
                    throw config_error("bound: rotation requires grid.points, window, horizon");
                // seeded soundness spot check of the certificate before use
                const std::uint64_t seed = opt.seed_override.value_or(cfg.seed);
                spot_check_certificate(sys, cert, std::min(cfg.grid_points, 50), 200, seed);
                const auto rep = verify_uniform_bound(sys, cfg.entourage, cfg.grid_points,
                                                      cfg.window, cfg.horizon, cert, workers);
                return finish_bound_report(rep, cert.summary(), digest, opt);
            }
            case SystemSpec::Kind::subshift: {
                const auto sys = make_subshift(cfg.system);
                if (cfg.entourage.kind != Entourage::Kind::cylinder)
                    throw config_error("bound: subshift requires a cylinder entourage");
                const auto cert = subshift_covering_K(sys, cfg.entourage, cfg.k_max);
                if (cfg.window <= 0 || cfg.horizon <= 0)
                    throw config_error("bound: subshift requires window and horizon");
                const auto rep =
                    verify_uniform_bound(sys, cfg.entourage, cfg.window, cfg.horizon, cert, workers);
                return finish_bound_report(rep, cert.summary(), digest, opt);
            }
            case SystemSpec::Kind::torus: {
                const auto action = make_torus(cfg.system);
                AmenableBoundOptions amopt;
                amopt.box_sides = cfg.box_sides;
                amopt.horizon = cfg.horizons;
                amopt.grid_points = cfg.grid_points > 0 ? cfg.grid_points : 8;
                amopt.k_max = cfg.k_max;
                amopt.workers = workers;
                amopt.cover_radius = cfg.certificate_radius;
                const auto rep = amenable_uniform_bound(action, cfg.entourage, amopt);
                return finish_bound_report(rep, rep.certificate, digest, opt);
            }
            case SystemSpec::Kind::flow: {
                const auto flow = flow_from_spec(cfg.system.flow);
                if (cfg.entourage.kind != Entourage::Kind::ball)
                    throw config_error("bound: flow requires a ball entourage");
                FlowBoundOptions fopt;
                fopt.horizon = static_cast<double>(cfg.horizon);
                if (!cfg.window_ladder.empty()) fopt.window_ladder = cfg.window_ladder;
                fopt.cert_radius = cfg.certificate_radius;
                fopt.grid_points = cfg.grid_points > 0 ? cfg.grid_points : 8;
                fopt.k_max = cfg.k_max;
                fopt.workers = workers;
                const auto out = flow_uniform_bound(flow, cfg.entourage.radius, fopt);
                json extra = report_json(out.report, digest);
                json windows = json::array();
                for (const auto& w : out.windows) {
                    windows.push_back({{"W", w.window},
                                       {"certified", w.certified},
                                       {"measured_min", w.measured_min},
                                       {"margin", w.margin}});
                }
                extra["windows"] = std::move(windows);
                extra["skeleton_K"] = out.skeleton_k;
                extra["delta"] = out.constants.delta;
                extra["alpha"] = out.constants.alpha;
                ensure_out_dir(opt.out_dir);
                write_text_file(opt.out_dir + "/report.json", extra.dump(2) + "\n");
                write_text_file(opt.out_dir + "/report.csv", density_rows_csv(out.report.rows));
                write_text_file(opt.out_dir + "/certificate.json",
                                certificate_json(out.report.certificate).dump(2) + "\n");
                return out.report.ok() ? kExitOk : kExitViolation;
            }
            default:
                throw config_error("bound: unsupported system kind for this command");
        }
    });
}

int cmd_density(const std::string& config_text, const CommandOptions& opt) {
    return run_guarded(opt, "density", [&]() -> int {
        const json doc = parse_document(config_text);
        const DensityConfig cfg = parse_density_config(doc);
        ensure_out_dir(opt.out_dir);

        std::vector<i64> times;
        std::string system_label, point_label, eps_label, profile_summary;
        if (cfg.synthetic) {
            system_label = "synthetic";
            point_label = cfg.set.label;
            eps_label = "-";
            if (cfg.set.kind == SyntheticSetSpec::Kind::coset) {
                for (i64 t = ((cfg.set.residue % cfg.set.modulus) + cfg.set.modulus) %
                             cfg.set.modulus;
                     t < cfg.horizon; t += cfg.set.modulus)
                    times.push_back(t);
            } else {
                for (i64 t : cfg.set.times)
                    if (t >= 0 && t < cfg.horizon) times.push_back(t);
                std::sort(times.begin(), times.end());
            }
        } else {
            switch (cfg.system.kind) {
                case SystemSpec::Kind::rotation: {
                    const auto sys = make_rotation(cfg.system);
                    const auto profile = return_set(sys, CirclePoint{0}, CirclePoint{0},
                                                    cfg.entourage, Window{0, cfg.horizon});
                    times = profile.times;
                    system_label = sys.name;
                    point_label = "0";
                    eps_label = cfg.entourage.str();
                    profile_summary = profile_json(profile);
                    break;
                }
                case SystemSpec::Kind::subshift: {
                    const auto sys = make_subshift(cfg.system);
                    const auto profile = return_set(sys, sys.point_at(0), sys.point_at(0),
                                                    cfg.entourage, Window{0, cfg.horizon});
                    times = profile.times;
                    system_label = sys.name();
                    point_label = "offset=0";
                    eps_label = cfg.entourage.str();
                    profile_summary = profile_json(profile);
                    break;
                }
                case SystemSpec::Kind::sequence: {
                    const auto sys = make_sequence(cfg.system);
                    const auto profile =
                        return_set(sys, 0, 0, cfg.entourage, Window{0, cfg.horizon});
                    times = profile.times;
                    system_label = sys.name;
                    point_label = "offset=0";
                    eps_label = cfg.entourage.str();
                    profile_summary = profile_json(profile);
                    break;
                }
                default:
                    throw config_error("density: unsupported system kind");
            }
        }

        std::string csv = "system,x,epsilon,W,horizon,min_count,min_frequency\r\n";
        json curve = json::array();
        for (i64 w : cfg.window_ladder) {
            const auto est = banach_lower_density(times, w, cfg.horizon);
            csv += csv_escape(system_label) + "," + csv_escape(point_label) + "," +
                   csv_escape(eps_label) + "," + std::to_string(w) + "," +
                   std::to_string(cfg.horizon) + "," + std::to_string(est.min_count) + "," +
                   est.min_frequency.str() + "\r\n";
            curve.push_back({{"W", w},
                             {"min_count", est.min_count},
                             {"min_frequency", est.min_frequency.str()},
                             {"value", est.min_frequency.value()},
                             {"argmin_M", est.argmin.begin}});
        }
        json out;
        out["version"] = 1;
        out["config_digest"] = config_digest(doc);
        out["system"] = system_label;
        out["point"] = point_label;
        out["visits"] = times.size();
        if (!profile_summary.empty()) out["profile"] = json::parse(profile_summary);
        out["curve"] = std::move(curve);
        write_text_file(opt.out_dir + "/density.json", out.dump(2) + "\n");
        write_text_file(opt.out_dir + "/density.csv", csv);
        return kExitOk;
    });
}

int cmd_folner(const std::string& config_text, const CommandOptions& opt) {
    return run_guarded(opt, "folner", [&]() -> int {
        const json doc = parse_document(config_text);
        const FolnerConfig cfg = parse_folner_config(doc);
        ensure_out_dir(opt.out_dir);
        json out;
        out["version"] = 1;
        out["config_digest"] = config_digest(doc);
        int code = kExitOk;

        if (cfg.mode == FolnerConfig::Mode::defect) {
            json ladder = json::array();
            for (i64 side : cfg.sides_ladder) {
                const auto box = FolnerBox::cube(cfg.d, side);
                const auto defect = folner_defect(box, cfg.translate);
                ladder.push_back(
                    {{"side", side}, {"defect", defect.str()}, {"value", defect.value()}});
            }
            out["mode"] = "defect";
            out["ladder"] = std::move(ladder);
        } else if (cfg.mode == FolnerConfig::Mode::doubling) {
            FolnerBox box{cfg.corner, cfg.sides};
            const auto r = core_doubling_check(box, cfg.shifts);
            out["mode"] = "doubling";
            out["ok"] = r.ok;
            out["volume"] = r.volume;
            out["intersection"] = r.intersection;
            out["ratio"] = r.empty_intersection ? "inf" : r.ratio.str();
            code = r.ok ? kExitOk : kExitViolation;
        } else if (cfg.mode == FolnerConfig::Mode::ap) {
            std::vector<i64> times;
            std::string label;
            if (cfg.ap_synthetic) {
                label = cfg.ap_set.label;
                if (cfg.ap_set.kind == SyntheticSetSpec::Kind::coset) {
                    for (i64 t = ((cfg.ap_set.residue % cfg.ap_set.modulus) + cfg.ap_set.modulus) %
                                 cfg.ap_set.modulus;
                         t < cfg.ap_region; t += cfg.ap_set.modulus)
                        times.push_back(t);
                } else {
                    for (i64 t : cfg.ap_set.times)
                        if (t >= 0 && t < cfg.ap_region) times.push_back(t);
                    std::sort(times.begin(), times.end());
                }
            } else {
                if (cfg.ap_system.kind != SystemSpec::Kind::rotation)
                    throw config_error("folner.ap: only rotation visit sets are supported");
                const auto sys = make_rotation(cfg.ap_system);
                times = return_set(sys, CirclePoint{0}, CirclePoint{0}, cfg.ap_entourage,
                                   Window{0, cfg.ap_region})
                            .times;
                label = sys.name + " " + cfg.ap_entourage.str();
            }
            const auto oracle = SetOracle::explicit_1d(times);
            const auto verdict =
                ap_characterization(oracle, FolnerBox::cube(1, cfg.ap_region), cfg.ap_ladder);
            out["mode"] = "ap";
            out["set"] = label;
            out["verdict"] = verdict.ap_consistent ? "AP-consistent" : "NOT-AP";
            out["max_gap"] = verdict.max_gap;
            json ladder = json::array();
            for (const auto& e : verdict.ladder) {
                json entry;
                entry["size"] = e.size;
                entry["empty_box_found"] = e.empty_box_found;
                if (e.empty_box_found) entry["witness_corner"] = e.witness_corner;
                ladder.push_back(std::move(entry));
            }
            out["ladder"] = std::move(ladder);
        } else {
            const auto oracle = SetOracle::coset(cfg.moduli, cfg.residues);
            const int d = static_cast<int>(cfg.moduli.size());
            SyndeticWitness witness;
            witness.K = cfg.witness_k;
            witness.region = FolnerBox::cube(d, cfg.region_side);
            std::vector<FolnerBox> boxes;
            for (i64 side : cfg.cube_sides) boxes.push_back(FolnerBox::cube(d, side));
            const auto rep = syndetic_box_density(oracle, witness, boxes);
            out["mode"] = "syndetic";
            out["bound"] = rep.bound.str();
            out["threshold_index"] = rep.threshold_index;
            out["ok"] = rep.ok;
            json freqs = json::array();
            for (std::size_t i = 0; i < rep.frequencies.size(); ++i)
                freqs.push_back({{"side", cfg.cube_sides[i]},
                                 {"frequency", rep.frequencies[i].str()},
                                 {"value", rep.frequencies[i].value()}});
            out["frequencies"] = std::move(freqs);
            out["violations"] = rep.violations;
            code = rep.ok ? kExitOk : kExitViolation;
        }
        write_text_file(opt.out_dir + "/folner.json", out.dump(2) + "\n");
        return code;
    });
}

int cmd_flow(const std::string& config_text, const CommandOptions& opt) {
    return cmd_bound(config_text, opt);  // flow configs run the same pipeline
}

int cmd_probe(const std::string& config_text, const CommandOptions& opt) {
    return run_guarded(opt, "probe", [&]() -> int {
        const json doc = parse_document(config_text);
        const ProbeConfig cfg = parse_probe_config(doc);
        const auto sys = make_annulus(cfg.system);
        ensure_out_dir(opt.out_dir);

        std::string csv = "n,defect,expected,abs_err\r\n";
        double max_err = 0.0;
        bool radii_exact = true;
        constexpr double pi = 3.14159265358979323846;
        for (i64 n = 1; n <= cfg.n_max; ++n) {
            const double defect = sys.equicontinuity_defect(n, cfg.theta);
            const double expected = circ_angle_dist(sys.gamma(2 * n) * pi, 0.0);
            const double err = std::abs(defect - expected);
            max_err = std::max(max_err, err);
            const AnnulusPoint p{2 * n, cfg.theta};
            radii_exact = radii_exact && sys.iterate(p, 2 * n).circle == p.circle;
            csv += std::to_string(n) + "," + format_double(defect) + "," +
                   format_double(expected) + "," + format_double(err) + "\r\n";
        }
        json out;
        out["version"] = 1;
        out["config_digest"] = config_digest(doc);
        out["system"] = sys.name;
        out["n_max"] = cfg.n_max;
        out["max_abs_err"] = max_err;
        out["radii_exact"] = radii_exact;
        write_text_file(opt.out_dir + "/probe.json", out.dump(2) + "\n");
        write_text_file(opt.out_dir + "/probe.csv", csv);
        if (!opt.quiet) std::cerr << "probe: max_abs_err=" << max_err << "\n";
        return kExitOk;
    });
}

}  // namespace recur::cli
