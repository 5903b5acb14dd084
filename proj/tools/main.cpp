#include <CLI11.hpp>

#include <iostream>

#include "../src/cli/commands.hpp"

// recur: return-time statistics and certified recurrence-frequency bounds
// for concrete minimal dynamical systems.
int main(int argc, char** argv) {
    CLI::App app{"recur: certified recurrence-frequency bounds for concrete dynamical systems"};
    app.require_subcommand(1);

    std::string config_path;
    recur::cli::CommandOptions opt;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: out)");
        sub->add_option("--workers", opt.workers_override, "worker threads (default: config/cores)");
        sub->add_option("--seed", seed, "seed for sampling checks")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_flag("--quiet", opt.quiet, "suppress progress lines on stderr");
    };

    auto* bound = app.add_subcommand("bound", "certified uniform recurrence bound");
    auto* density = app.add_subcommand("density", "windowed lower-density curves");
    auto* folner = app.add_subcommand("folner", "box defect and doubling and syndetic-density ladders");
    auto* flow = app.add_subcommand("flow", "continuous-time window-average bound");
    auto* probe = app.add_subcommand("probe", "annulus equicontinuity-defect table");
    for (auto* sub : {bound, density, folner, flow, probe}) add_common(sub);

    CLI11_PARSE(app, argc, argv);
    if (seed_set) opt.seed_override = seed;

    std::string text;
    try {
        text = recur::cli::read_text_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"io\",\"detail\":\"" << e.what() << "\"}\n";
        return recur::cli::kExitIo;
    }

    if (app.got_subcommand(bound)) return recur::cli::cmd_bound(text, opt);
    if (app.got_subcommand(density)) return recur::cli::cmd_density(text, opt);
    if (app.got_subcommand(folner)) return recur::cli::cmd_folner(text, opt);
    if (app.got_subcommand(flow)) return recur::cli::cmd_flow(text, opt);
    if (app.got_subcommand(probe)) return recur::cli::cmd_probe(text, opt);
    return recur::cli::kExitConfig;
}
