#include "sparse_rls/output.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

namespace {

std::vector<std::size_t> kept_rows(std::size_t n, std::size_t every) {
    if (every < 1) throw InvalidArgument("decimation step must be at least 1");
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; i += every) rows.push_back(i);
    if (n > 0 && rows.back() != n - 1) rows.push_back(n - 1);
    return rows;
}

std::size_t curve_length(std::span<const LearningCurve> curves) {
    if (curves.empty()) return 0;
    const auto n = curves.front().mse.size();
    for (const auto& c : curves)
        if (c.mse.size() != n) throw InvalidArgument("learning curves differ in length");
    return n;
}

}  // namespace

void write_curves_csv(std::ostream& out, std::span<const LearningCurve> curves, std::size_t every) {
    out << "iter";
    for (const auto& c : curves) out << ',' << c.algorithm_id;
    out << '\n';
    for (auto i : kept_rows(curve_length(curves), every)) {
        out << i + 1;
        for (const auto& c : curves) out << ',' << text::format_double(c.mse[i]);
        out << '\n';
    }
}

nlohmann::json curves_json(std::span<const LearningCurve> curves, std::size_t window,
                           std::size_t every) {
    const auto rows = kept_rows(curve_length(curves), every);
    nlohmann::json j;
    j["schema_version"] = kOutputSchemaVersion;
    j["kind"] = "learning_curves";
    j["trials"] = curves.empty() ? 0 : curves.front().trials;
    j["n_iters"] = curve_length(curves);
    nlohmann::json iters = nlohmann::json::array();
    for (auto i : rows) iters.push_back(i + 1);
    j["iter"] = iters;

    nlohmann::json ids = nlohmann::json::array();
    nlohmann::json mse = nlohmann::json::object();
    nlohmann::json steady = nlohmann::json::object();
    for (const auto& c : curves) {
        ids.push_back(c.algorithm_id);
        nlohmann::json col = nlohmann::json::array();
        for (auto i : rows) col.push_back(c.mse[i]);
        mse[c.algorithm_id] = col;
        steady[c.algorithm_id] = steady_state_mse(c, window);
    }
    j["algorithms"] = ids;
    j["mse"] = mse;
    j["steady_state"] = {{"window", window}, {"mse", steady}};
    return j;
}

void write_sweep_csv(std::ostream& out, const std::string& algorithm_id, std::size_t window,
                     const SweepResult& res) {
    out << "# algorithm=" << algorithm_id << " window=" << window
        << " best_gamma=" << text::format_double(res.best_gamma) << '\n';
    out << "gamma,steady_mse\n";
    for (std::size_t i = 0; i < res.gamma_grid.size(); ++i)
        out << text::format_double(res.gamma_grid[i]) << ',' << text::format_double(res.steady_mse[i]) << '\n';
}

nlohmann::json sweep_json(const std::string& algorithm_id, std::size_t window, const SweepResult& res) {
    return {{"schema_version", kOutputSchemaVersion},
            {"kind", "gamma_sweep"},
            {"algorithm", algorithm_id},
            {"window", window},
            {"gamma", res.gamma_grid},
            {"steady_mse", res.steady_mse},
            {"best_gamma", res.best_gamma}};
}

std::vector<std::size_t> support_of(const Vector& w) {
    std::vector<std::size_t> s;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) s.push_back(static_cast<std::size_t>(i));
    return s;
}

nlohmann::json identification_json(const Identification& id) {
    nlohmann::json alpha = {{"satisfied", id.alpha.satisfied},
                            {"s1", id.alpha.s1},
                            {"alpha2", id.alpha.alpha2}};
    // JSON has no infinity; an all-zero input leaves the bound open
    if (std::isfinite(id.alpha.alpha2_max))
        alpha["alpha2_max"] = id.alpha.alpha2_max;
    else
        alpha["alpha2_max"] = nullptr;

    return {{"schema_version", kOutputSchemaVersion},
            {"kind", "identification"},
            {"algorithm", id.algorithm_id},
            {"m", id.w_hat.size()},
            {"n_samples", id.xi.size()},
            {"w_hat", std::vector<double>(id.w_hat.data(), id.w_hat.data() + id.w_hat.size())},
            {"support", support_of(id.w_hat)},
            {"xi", id.xi},
            {"alpha_condition", alpha}};
}

nlohmann::json manifest_json(const std::string& command, const nlohmann::json& config,
                             std::uint64_t seed, const std::string& timestamp) {
    return {{"artifact", kArtifactName},
            {"version", kArtifactVersion},
            {"schema_version", kOutputSchemaVersion},
            {"command", command},
            {"seed", seed},
            {"timestamp", timestamp},
            {"config", config}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace sparse_rls
