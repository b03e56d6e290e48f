#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimspec/spectrum.hpp"

namespace dimspec::cli {

struct SystemConfig {
    std::string family;  // "affine" | "continued-fraction"
    std::vector<double> ratios;
    std::vector<double> offsets;
    std::vector<int> digits;
    std::optional<double> k_override;
};

struct ShiftConfig {
    bool present = false;
    std::string kind;  // "full" | "beta" | "markov" | "coded"
    double beta = 0.0;
    std::optional<int> alphabet;  // full/markov; defaults to the system letters
    std::vector<std::pair<int, int>> edges;
    std::vector<Word> blocks;
    double index_beta = 0.0;
};

struct TaskConfig {
    std::string name;
    // dimension / curve
    std::optional<double> target_width;
    // pressure
    double t = 0.0;
    std::optional<int> depth;
    // language
    int n = 0;
    // invert / markov-invert
    double target = 0.0;
    std::optional<double> epsilon;
    int anchor = 0;
    // curve
    double beta_lo = 0.0, beta_hi = 0.0, step = 0.1;
    // replace
    double beta = 0.0, beta_prime = 0.0;
    int gap = 1;
    Word word;
    // exhaust
    std::vector<int> truncations;
};

struct OutputConfig {
    std::string format = "json";  // "json" | "csv"
    std::string path;             // empty: stdout
    bool timings = false;         // opt-in; breaks byte-identity across runs
};

struct RunConfig {
    SystemConfig system;
    ShiftConfig shift;
    TaskConfig task;
    Budgets budgets;
    OutputConfig output;
};

// Parses and validates; throws ConfigError naming the offending field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

// Normalized echo of the configuration (defaults filled in).
nlohmann::json config_echo(const RunConfig& cfg);

// Builds the refined system / shift described by the configuration.
SystemSpec build_system(const SystemConfig& cfg);
ShiftSpec build_shift(const ShiftConfig& cfg, const SystemSpec& sys);

}  // namespace dimspec::cli
