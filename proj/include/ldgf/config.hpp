#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldgf/energy.hpp"

namespace ldgf {

struct DissipationBlock {
    std::string family = "cosh";
    std::vector<double> beta_list;  ///< check-dissipation, mosco-q, mosco-ri
    std::optional<double> M;
    std::optional<double> R;

    bool operator==(const DissipationBlock&) const = default;
};

struct RegimeBlock {
    std::optional<int> n;
    std::vector<int> n_list;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> omega;
    std::optional<double> A;
    std::optional<double> h;
    std::optional<double> delta;
    std::optional<double> radius;     ///< ldp tube radius
    std::optional<double> amplitude;  ///< langevin wiggle height

    bool operator==(const RegimeBlock&) const = default;
};

struct RunBlock {
    double T = 1.0;
    double x0 = 0.0;
    std::optional<double> dt;
    double tol = 1e-8;
    std::size_t replicas = 1;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    std::size_t record_every = 1;
    std::optional<std::string> curve;  ///< input curve CSV for action, mosco-q, mosco-ri, ldp

    bool operator==(const RunBlock&) const = default;
};

struct OutputBlock {
    std::string directory = ".";
    std::vector<std::string> formats{"csv", "json"};

    bool operator==(const OutputBlock&) const = default;
};

struct ExperimentConfig {
    LandscapeSpec landscape;
    DissipationBlock dissipation;
    RegimeBlock regime;
    RunBlock run;
    OutputBlock output;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a JSON config; unknown keys and wrong types are config_invalid.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON text (sorted keys, absent optionals omitted).
std::string serialize_config(const ExperimentConfig& config);

/// The commands accepted by `run`.
const std::vector<std::string>& command_names();
bool is_stochastic(std::string_view command);

/// Checks that the blocks required by `command` are present and consistent;
/// throws config_invalid otherwise.
void validate_config(const ExperimentConfig& config, std::string_view command);

}  // namespace ldgf
