#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ldgf/config.hpp"

namespace ldgf {

inline constexpr const char* kVersion = "0.1.0";

struct CliOptions {
    std::optional<std::string> out_dir;  ///< overrides output.directory
    bool strict = false;                 ///< domain-exit flags make the exit status nonzero
    std::optional<std::uint64_t> seed;   ///< overrides run.seed
};

enum ExitStatus : int {
    exit_ok = 0,
    exit_runtime_error = 1,
    exit_config_error = 2,
    exit_domain_exit = 3,
};

struct RunResult {
    int exit_code = exit_ok;
    std::vector<std::string> files;  ///< paths written
    std::string error_json;          ///< empty on success
};

/// Validates `config` for `command`, runs it, and writes
/// `<command>-<hash>.csv` and `<command>-<hash>.json` under the output
/// directory. The hash is FNV-1a of the canonical config with the output
/// block removed. Errors are reported in `error_json`, never thrown.
RunResult run_command(const std::string& command, ExperimentConfig config, const CliOptions& options);

/// `ldgf run <command> <config.json> [--out DIR] [--strict] [--seed N]`.
/// Writes the paths of the produced files to `out` and error JSON to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldgf
