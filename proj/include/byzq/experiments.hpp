#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace byzq {

inline constexpr const char* kVersion = "1.0.0";

/// One constraint violation found while validating a config, addressed by
/// the JSON field path it concerns.
struct Diagnostic {
    std::string path;
    std::string message;
};

/// A parsed experiment config: registry id, seed, output path, and the
/// experiment-specific parameter object (validated separately).
struct ExperimentConfig {
    int schema_version = 1;
    std::string experiment;
    std::uint64_t seed = 0;
    std::string out;
    nlohmann::json params = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Rectangular numeric result plus ordered metadata, serialized as CSV with
/// leading '#' comment lines. Floats are written in their shortest
/// round-trip decimal form, so identical runs are byte-identical.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

struct ExperimentInfo {
    std::string id;
    std::string description;
    std::string reproduces;  // figure/table label the output corresponds to
};

const std::vector<ExperimentInfo>& experiment_registry();

/// Parses a config document; throws std::invalid_argument on structural
/// problems (bad JSON handled by the caller via nlohmann).
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Lists every constraint violation (empty means runnable).
std::vector<Diagnostic> validate_config(const ExperimentConfig& c);

/// Runs one experiment. Re-validates first and throws std::invalid_argument
/// with the first diagnostic when the config is bad.
ResultTable run_experiment(const ExperimentConfig& c);

std::string format_double(double v);
std::string to_csv(const ResultTable& t);
void write_csv(const ResultTable& t, const std::string& path);

}  // namespace byzq
