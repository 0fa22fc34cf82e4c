#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "sparse_rls/config.hpp"
#include "sparse_rls/harness.hpp"

namespace sparse_rls {

/// Bumped whenever a column, key or row layout below changes.
inline constexpr int kOutputSchemaVersion = 1;
inline constexpr const char* kArtifactName = "sparse-rls";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// `iter,<id_1>,...,<id_k>` then one row per kept iteration (1-based).
/// every > 1 keeps iterations 1, 1 + every, ... and always the last one.
void write_curves_csv(std::ostream& out, std::span<const LearningCurve> curves,
                      std::size_t every = 1);
nlohmann::json curves_json(std::span<const LearningCurve> curves, std::size_t window,
                           std::size_t every = 1);

void write_sweep_csv(std::ostream& out, const std::string& algorithm_id, std::size_t window,
                     const SweepResult& res);
nlohmann::json sweep_json(const std::string& algorithm_id, std::size_t window,
                          const SweepResult& res);

struct Identification {
    std::string algorithm_id;
    Vector w_hat;
    std::vector<double> xi;
    AlphaCondition alpha;
};

std::vector<std::size_t> support_of(const Vector& w);

nlohmann::json identification_json(const Identification& id);

nlohmann::json manifest_json(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::string& timestamp);

/// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace sparse_rls
