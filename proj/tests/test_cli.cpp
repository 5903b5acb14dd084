#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "../src/cli/commands.hpp"
#include "recur/kernels/kernels.hpp"

using namespace recur;
using namespace recur::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("recur_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CommandOptions opts(const TempDir& dir) {
    CommandOptions o;
    o.out_dir = dir.str();
    o.quiet = true;
    return o;
}

const char* kGoldenBound = R"({
  "version": 1,
  "system": {"kind": "rotation", "alpha": "golden"},
  "entourage": {"radius": 0.15},
  "certificate": {"radius": 0.05},
  "grid": {"points": 80},
  "window": 1000,
  "horizon": 20000,
  "workers": 2,
  "seed": 1
})";

}  // namespace

TEST_CASE("bound: golden rotation exits 0 with a nonnegative margin") {
    TempDir dir;
    CHECK(cmd_bound(kGoldenBound, opts(dir)) == kExitOk);
    const auto rep = parse_document(slurp(dir.path / "report.json"));
    CHECK(rep.at("violations").empty());
    CHECK(rep.at("margin").get<double>() >= 0.0);
    CHECK(rep.at("certificate").at("K").get<long long>() == 12);
    const auto csv = slurp(dir.path / "report.csv");
    CHECK(csv.substr(0, 8) == "system,x");
    CHECK(fs::exists(dir.path / "certificate.json"));
}

TEST_CASE("bound: radius below the error budget refuses with the budget exit code") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "rotation", "alpha": "golden"},
      "entourage": {"radius": 1e-13},
      "certificate": {"radius": 3e-14},
      "grid": {"points": 200000000},
      "window": 1000,
      "horizon": 100000
    })";
    CHECK(cmd_bound(cfg, opts(dir)) == kExitBudget);
}

TEST_CASE("bound: covering refusal for a sparse rational rotation") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "rotation", "alpha": {"rational": [1, 3]}},
      "entourage": {"radius": 0.15},
      "certificate": {"radius": 0.05},
      "grid": {"points": 80},
      "window": 1000,
      "horizon": 20000
    })";
    CHECK(cmd_bound(cfg, opts(dir)) == kExitCovering);
}

TEST_CASE("malformed JSON maps to the config exit code") {
    TempDir dir;
    CHECK(cmd_bound("{\n  \"version\": 1,\n  oops\n}", opts(dir)) == kExitConfig);
}

TEST_CASE("unknown fields are rejected") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "rotation", "alpha": "golden", "extra": true},
      "entourage": {"radius": 0.15},
      "grid": {"points": 80},
      "window": 1000,
      "horizon": 20000
    })";
    CHECK(cmd_bound(cfg, opts(dir)) == kExitConfig);
}

TEST_CASE("bound: fibonacci cylinders") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "subshift", "alphabet": "01",
                 "rules": {"0": "01", "1": "0"}, "name": "fibonacci"},
      "entourage": {"depth": 3},
      "window": 1000,
      "horizon": 50000,
      "workers": 2
    })";
    CHECK(cmd_bound(cfg, opts(dir)) == kExitOk);
    const auto rep = parse_document(slurp(dir.path / "report.json"));
    CHECK(rep.at("certificate").at("K").get<long long>() == 7);
    CHECK(rep.at("rows").size() == 4);
}

TEST_CASE("bound: torus product runs the amenable pipeline") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "torus", "alphas": ["golden", "golden"]},
      "entourage": {"radius": 0.3},
      "box_sides": [50, 50],
      "horizons": [2000, 2000],
      "grid": {"points": 4},
      "window": 0,
      "horizon": 0
    })";
    CHECK(cmd_bound(cfg, opts(dir)) == kExitOk);
    const auto rep = parse_document(slurp(dir.path / "report.json"));
    CHECK(rep.at("certified_bound").get<std::string>() == "1/18");
}

TEST_CASE("flow command produces window results") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "flow", "v": [1.0, "golden"], "normalize": true, "name": "golden-flow"},
      "entourage": {"radius": 0.15},
      "certificate": {"radius": 0.05},
      "window_ladder": [100, 1000],
      "horizon": 2000,
      "grid": {"points": 2}
    })";
    CHECK(cmd_flow(cfg, opts(dir)) == kExitOk);
    const auto rep = parse_document(slurp(dir.path / "report.json"));
    CHECK(rep.at("continuous").get<bool>());
    CHECK(rep.at("windows").size() == 2);
    for (const auto& w : rep.at("windows"))
        CHECK(w.at("measured_min").get<double>() >= w.at("certified").get<double>());
}

TEST_CASE("density: synthetic even integers give a flat 1/2 curve") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "source": {"kind": "synthetic", "set": {"coset": {"modulus": 2, "residue": 0}}},
      "window_ladder": [100, 1000, 10000],
      "horizon": 100000
    })";
    CHECK(cmd_density(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "density.json"));
    for (const auto& row : out.at("curve"))
        CHECK(row.at("min_frequency").get<std::string>() == "1/2");
}

TEST_CASE("density: single visit gives the zero curve") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "source": {"kind": "synthetic", "set": {"explicit": [0]}},
      "window_ladder": [10, 100],
      "horizon": 10000
    })";
    CHECK(cmd_density(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "density.json"));
    for (const auto& row : out.at("curve"))
        CHECK(row.at("min_frequency").get<std::string>() == "0/1");
}

TEST_CASE("density: golden rotation curve clears the gap bound at large W") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "source": {"kind": "system",
                 "system": {"kind": "rotation", "alpha": "golden"},
                 "entourage": {"radius": 0.05}},
      "window_ladder": [1300, 13000],
      "horizon": 100000
    })";
    CHECK(cmd_density(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "density.json"));
    for (const auto& row : out.at("curve"))
        CHECK(row.at("value").get<double>() >= 1.0 / 13.0 - 1e-12);
}

TEST_CASE("folner: defect ladder is 2/n") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "mode": "defect",
      "defect": {"d": 1, "sides": [10, 100, 1000], "t": [1]}
    })";
    CHECK(cmd_folner(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "folner.json"));
    CHECK(out.at("ladder")[0].at("defect").get<std::string>() == "1/5");
    CHECK(out.at("ladder")[1].at("defect").get<std::string>() == "1/50");
    CHECK(out.at("ladder")[2].at("defect").get<std::string>() == "1/500");
}

TEST_CASE("folner: syndetic coset ladder reports the threshold") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "mode": "syndetic",
      "syndetic": {"moduli": [3], "residues": [0], "k": [[0], [1], [2]],
                  "cube_sides": [9, 99, 999], "region_side": 4000}
    })";
    CHECK(cmd_folner(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "folner.json"));
    CHECK(out.at("bound").get<std::string>() == "1/6");
    CHECK(out.at("frequencies").back().at("frequency").get<std::string>() == "1/3");
    CHECK(out.at("threshold_index").get<int>() == 0);
}

TEST_CASE("folner: 2-d coset ladder converges to 1/6 above 1/12") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "mode": "syndetic",
      "syndetic": {"moduli": [2, 3], "residues": [0, 0],
                  "k": [[0,0],[0,1],[0,2],[1,0],[1,1],[1,2]],
                  "cube_sides": [12, 60, 300], "region_side": 600}
    })";
    CHECK(cmd_folner(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "folner.json"));
    CHECK(out.at("bound").get<std::string>() == "1/12");
    CHECK(out.at("frequencies").back().at("frequency").get<std::string>() == "1/6");
}

TEST_CASE("folner: ap verdicts serialize with replayable witnesses") {
    TempDir dir;
    const char* thick = R"({
      "version": 1,
      "mode": "ap",
      "ap": {"set": {"explicit": [0]}, "ladder": [10, 100, 1000], "region": 100000}
    })";
    CHECK(cmd_folner(thick, opts(dir)) == kExitOk);
    auto out = parse_document(slurp(dir.path / "folner.json"));
    CHECK(out.at("verdict").get<std::string>() == "NOT-AP");
    CHECK(out.at("ladder")[0].at("witness_corner")[0].get<long long>() == 1);

    const char* syndetic = R"({
      "version": 1,
      "mode": "ap",
      "ap": {"system": {"kind": "rotation", "alpha": "golden"},
             "entourage": {"radius": 0.05},
             "ladder": [10, 100, 1000], "region": 100000}
    })";
    CHECK(cmd_folner(syndetic, opts(dir)) == kExitOk);
    out = parse_document(slurp(dir.path / "folner.json"));
    CHECK(out.at("verdict").get<std::string>() == "AP-consistent");
    CHECK(out.at("max_gap").get<long long>() == 12);
}

TEST_CASE("folner: failing doubling check maps to the violation exit code") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "mode": "doubling",
      "doubling": {"corner": [0], "sides": [5], "shifts": [[0], [4]]}
    })";
    CHECK(cmd_folner(cfg, opts(dir)) == kExitViolation);
    const auto out = parse_document(slurp(dir.path / "folner.json"));
    CHECK_FALSE(out.at("ok").get<bool>());
}

TEST_CASE("probe: annulus defect table") {
    TempDir dir;
    const char* cfg = R"({
      "version": 1,
      "system": {"kind": "annulus", "alpha": 0.03125},
      "n_max": 100,
      "theta": 0.0
    })";
    CHECK(cmd_probe(cfg, opts(dir)) == kExitOk);
    const auto out = parse_document(slurp(dir.path / "probe.json"));
    CHECK(out.at("max_abs_err").get<double>() < 1e-9);
}

TEST_CASE("replay determinism: identical configs produce identical bytes") {
    TempDir dir1, dir2;
    REQUIRE(cmd_bound(kGoldenBound, opts(dir1)) == kExitOk);
    REQUIRE(cmd_bound(kGoldenBound, opts(dir2)) == kExitOk);
    CHECK(slurp(dir1.path / "report.json") == slurp(dir2.path / "report.json"));
    CHECK(slurp(dir1.path / "report.csv") == slurp(dir2.path / "report.csv"));
    CHECK(slurp(dir1.path / "certificate.json") == slurp(dir2.path / "certificate.json"));
}

TEST_CASE("worker count does not change the report") {
    TempDir dir1, dir2;
    auto o1 = opts(dir1);
    o1.workers_override = 1;
    auto o2 = opts(dir2);
    o2.workers_override = 2;
    REQUIRE(cmd_bound(kGoldenBound, o1) == kExitOk);
    REQUIRE(cmd_bound(kGoldenBound, o2) == kExitOk);
    CHECK(slurp(dir1.path / "report.json") == slurp(dir2.path / "report.json"));
}

#if defined(RECUR_HAVE_AVX2)
TEST_CASE("kernel backends produce byte-identical reports end to end") {
    namespace k = recur::kernels;
    REQUIRE(k::active_backend() == k::Backend::avx2);
    TempDir dir1, dir2;
    k::force_backend(k::Backend::scalar);
    const int c1 = cmd_bound(kGoldenBound, opts(dir1));
    k::force_backend(k::Backend::avx2);
    const int c2 = cmd_bound(kGoldenBound, opts(dir2));
    k::force_backend(std::nullopt);
    REQUIRE(c1 == kExitOk);
    REQUIRE(c2 == kExitOk);
    CHECK(slurp(dir1.path / "report.json") == slurp(dir2.path / "report.json"));
    CHECK(slurp(dir1.path / "report.csv") == slurp(dir2.path / "report.csv"));
}
#endif

TEST_CASE("stored certificates are replayed and validated") {
    TempDir dir;
    const fs::path cert_path = dir.path / "stored_cert.json";
    std::string cfg = R"({
      "version": 1,
      "system": {"kind": "rotation", "alpha": "golden"},
      "entourage": {"radius": 0.15},
      "certificate": {"radius": 0.05, "path": ")" +
                      cert_path.string() + R"("},
      "grid": {"points": 80},
      "window": 1000,
      "horizon": 20000
    })";
    REQUIRE(cmd_bound(cfg, opts(dir)) == kExitOk);  // computes and stores
    REQUIRE(fs::exists(cert_path));
    CHECK(cmd_bound(cfg, opts(dir)) == kExitOk);  // replays from the file

    // tampering with the stored hash is caught
    auto stored = parse_document(slurp(cert_path));
    stored["system_hash"] = 12345;
    std::ofstream(cert_path) << stored.dump(2);
    CHECK(cmd_bound(cfg, opts(dir)) == kExitConfig);
}
