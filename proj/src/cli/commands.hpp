#pragma once

#include <optional>
#include <string>

#include "config.hpp"

// Subcommand drivers shared by the CLI binary and the test suites. Each
// parses a config document, runs the experiment, writes report files into
// out_dir and returns the process exit code.
namespace recur::cli {

// Exit codes (machine-readable refusal contract).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitCovering = 4;
inline constexpr int kExitViolation = 5;
inline constexpr int kExitIo = 6;

struct CommandOptions {
    std::string out_dir = "out";
    int workers_override = -1;  // -1: take the config / default
    std::optional<std::uint64_t> seed_override;
    bool quiet = false;
};

int cmd_bound(const std::string& config_text, const CommandOptions& opt);
int cmd_density(const std::string& config_text, const CommandOptions& opt);
int cmd_folner(const std::string& config_text, const CommandOptions& opt);
int cmd_flow(const std::string& config_text, const CommandOptions& opt);
int cmd_probe(const std::string& config_text, const CommandOptions& opt);

std::string read_text_file(const std::string& path);

}  // namespace recur::cli
