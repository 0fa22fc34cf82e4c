#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sparse_rls/harness.hpp"

namespace sparse_rls {

/// User-facing configuration problem; `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field.empty() ? message : field + ": " + message),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Config files are line-oriented key/value text:
//
//   # comment
//   [experiment]
//   m = 100
//   lambda = 0.999
//
//   [algorithm EM-p0.5]
//   kind = em
//   p = 0.5
//   gamma = 0.28
//
// One [experiment] section, one [algorithm <id>] section per estimator, in
// output order. A JSON run manifest is accepted in place of the text form.

struct ConfigSection {
    std::string name;  // "experiment" or "algorithm"
    std::string label; // algorithm id
    std::size_t line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<ConfigSection> parse_config_sections(const std::string& text);

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Filter setup for `identify`: lambda, noise variance and a single algorithm.
struct IdentifyConfig {
    double lambda = 0.999;
    double noise_variance = 0.0;
    AlgorithmConfig algorithm;
};

IdentifyConfig parse_identify_config(const std::string& text);
IdentifyConfig load_identify_config(const std::filesystem::path& path);

nlohmann::json to_json(const AlgorithmConfig& algo);
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const nlohmann::json& j);

}  // namespace sparse_rls
