#pragma once
// JSON-configured experiments: pick a scenario and algorithm, run the exact or
// Monte Carlo engine, evaluate the requested checks, and write curve CSV,
// coverage CSV, optional trajectory JSON, and a report JSON.

#include "germ/montecarlo.hpp"
#include "germ/scenarios.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace germ {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitBadConfig = 2, kExitResource = 3 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MonotoneCheck {
    // Exact engine: absolute tolerance. Monte Carlo: multiple of the pooled
    // standard error of adjacent points.
    double tolerance = 0.0;
};

struct CoverageCheck {
    std::string event;
    double delta = 0.0;
};

struct DecayCheck {
    double beta = 0.0;
    double max_slope = 0.0;
};

using Check = std::variant<MonotoneCheck, CoverageCheck, DecayCheck>;

struct ExactEngine {
    std::size_t n_max = 8;
};

struct McEngine {
    std::size_t replications = 1;
    std::size_t n_max = 1;
    std::vector<std::size_t> grid;
};

struct ExperimentConfig {
    std::string scenario;
    std::string algorithm = "germ:massart"; // canonical spec, see parse_algorithm
    std::variant<ExactEngine, McEngine> engine;
    std::optional<std::uint64_t> seed;
    std::vector<Check> checks;
    std::filesystem::path output_dir = "germ_out";
    bool dump_trajectory = false;
    // Execution settings; not part of the echoed config.
    std::size_t workers = 1;
};

// Throws ConfigError on malformed JSON, unknown fields values, or a missing
// seed for the Monte Carlo engine. Defaults are filled in.
ExperimentConfig parse_experiment_config(std::string_view json_text);

// Resolved configuration as JSON, excluding workers and output_dir.
std::string config_echo(const ExperimentConfig& config);

// Log-spaced checkpoints 1, 2, 3, 6, 10, 18, ... up to and including n_max.
std::vector<std::size_t> default_grid(std::size_t n_max);

struct ExperimentResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> artifacts;
    std::vector<std::string> summary; // one machine-parseable line per check
    std::string error;
};

// Never throws for config, resource, or check failures; they map to exit codes.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment_file(const std::filesystem::path& config_path, std::size_t workers,
                                     const std::optional<std::filesystem::path>& output_override = std::nullopt);

} // namespace germ
