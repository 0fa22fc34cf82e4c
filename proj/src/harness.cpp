#include "sparse_rls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

std::string_view to_string(AlgorithmKind kind) {
    switch (kind) {
        case AlgorithmKind::Rls: return "rls";
        case AlgorithmKind::CrRls: return "cr-rls";
        case AlgorithmKind::EmRls: return "em";
    }
    return "?";
}

std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view s) {
    if (s == "rls") return AlgorithmKind::Rls;
    if (s == "cr-rls" || s == "crrls") return AlgorithmKind::CrRls;
    if (s == "em" || s == "em-rls") return AlgorithmKind::EmRls;
    return std::nullopt;
}

ThresholdSpec AlgorithmConfig::threshold_spec() const {
    return ThresholdSpec::from_ratio(p, alpha_over_sigma * alpha_over_sigma, gamma, delta, beta);
}

void AlgorithmConfig::validate(std::size_t m) const {
    const std::string where = "algorithm '" + id + "': ";
    if (id.empty()) throw InvalidArgument("algorithm id must not be empty");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidArgument(where + "gamma must be nonnegative");
    switch (kind) {
        case AlgorithmKind::Rls:
        case AlgorithmKind::CrRls:
            if (!(rho_for(m) > 0.0)) throw InvalidArgument(where + "rho must be positive");
            if (kind == AlgorithmKind::CrRls) sparse_rls::validate(penalty);
            break;
        case AlgorithmKind::EmRls:
            if (k_iters < 1) throw InvalidArgument(where + "k_iters must be at least 1");
            try {
                (void)threshold_spec();
            } catch (const InvalidArgument& e) {
                throw IllPosedThreshold(where + e.what());
            }
            break;
    }
}

std::unique_ptr<AdaptiveFilter> make_filter(const AlgorithmConfig& algo, std::size_t m,
                                            double lambda) {
    algo.validate(m);
    switch (algo.kind) {
        case AlgorithmKind::Rls:
            return std::make_unique<RlsFilter>(m, lambda, algo.rho_for(m));
        case AlgorithmKind::CrRls:
            return std::make_unique<RlsFilter>(m, lambda, algo.rho_for(m), algo.gamma, algo.penalty);
        case AlgorithmKind::EmRls:
            return std::make_unique<EmRlsFilter>(m, algo.threshold_spec(), lambda, algo.k_iters,
                                                 algo.e_step);
    }
    throw InvalidArgument("unknown algorithm kind");
}

void ExperimentConfig::validate() const {
    if (m < 1) throw InvalidArgument("m must be positive");
    if (r_true < 1 || r_true > m) throw InvalidArgument("r_true must lie in [1, m]");
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
        throw InvalidArgument("noise_variance must be nonnegative");
    if (input_variance && (!(*input_variance > 0.0) || !std::isfinite(*input_variance)))
        throw InvalidArgument("input_variance must be positive");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in (0, 1]");
    if (n_iters < 1) throw InvalidArgument("n_iters must be at least 1");
    if (n_trials < 1) throw InvalidArgument("n_trials must be at least 1");
    if (threads && *threads < 1) throw InvalidArgument("threads must be at least 1");
    if (algorithms.empty()) throw InvalidArgument("no algorithms configured");
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        algorithms[i].validate(m);
        for (std::size_t j = 0; j < i; ++j)
            if (algorithms[j].id == algorithms[i].id)
                throw InvalidArgument("duplicate algorithm id '" + algorithms[i].id + "'");
    }
}

SparseSystem trial_system(const ExperimentConfig& cfg, std::size_t trial) {
    return generate_sparse_system(cfg.m, cfg.r_true, substream_seed(cfg.seed, trial, 0));
}

SampleStream trial_stream(const ExperimentConfig& cfg, std::size_t trial) {
    SignalConfig sig{cfg.m, cfg.input_variance_or_default(), cfg.noise_variance,
                     substream_seed(cfg.seed, trial, 1)};
    return SampleStream(trial_system(cfg, trial), sig);
}

std::vector<std::vector<double>> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    auto stream = trial_stream(cfg, trial);
    const Vector& truth = stream.system().taps;

    std::vector<std::unique_ptr<AdaptiveFilter>> filters;
    filters.reserve(cfg.algorithms.size());
    for (const auto& algo : cfg.algorithms) filters.push_back(make_filter(algo, cfg.m, cfg.lambda));

    std::vector<std::vector<double>> dev(cfg.algorithms.size(), std::vector<double>(cfg.n_iters));
    for (std::size_t n = 0; n < cfg.n_iters; ++n) {
        const SamplePair sample = stream.next();
        for (std::size_t a = 0; a < filters.size(); ++a) {
            try {
                const auto out = filters[a]->step(sample);
                dev[a][n] = (out.w_hat - truth).squaredNorm();
            } catch (const NumericFailure& e) {
                throw e.with_algorithm(cfg.algorithms[a].id).with_trial(static_cast<long>(trial));
            }
        }
    }
    return dev;
}

std::vector<LearningCurve> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::size_t trials = cfg.n_trials;
    std::vector<std::vector<std::vector<double>>> per_trial(trials);
    std::vector<std::exception_ptr> errors(trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            try {
                per_trial[t] = run_trial(cfg, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    const unsigned n_workers = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(trials));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    }
    // lowest failing trial wins, whatever the scheduling
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<LearningCurve> curves;
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        LearningCurve c{cfg.algorithms[a].id, std::vector<double>(cfg.n_iters, 0.0), trials};
        for (std::size_t t = 0; t < trials; ++t)
            for (std::size_t n = 0; n < cfg.n_iters; ++n) c.mse[n] += per_trial[t][a][n];
        for (auto& v : c.mse) v /= static_cast<double>(trials);
        curves.push_back(std::move(c));
    }
    return curves;
}

double steady_state_mse(const LearningCurve& curve, std::size_t window) {
    if (window < 1 || window > curve.mse.size())
        throw InvalidArgument("steady-state window " + std::to_string(window) +
                              " outside [1, " + std::to_string(curve.mse.size()) + "]");
    double sum = 0.0;
    for (auto it = curve.mse.end() - static_cast<std::ptrdiff_t>(window); it != curve.mse.end(); ++it)
        sum += *it;
    return sum / static_cast<double>(window);
}

SweepResult sweep_gamma(const ExperimentConfig& cfg, const std::string& algorithm_id,
                        std::span<const double> gamma_grid, std::size_t window, unsigned threads) {
    if (gamma_grid.empty()) throw InvalidArgument("sweep: empty gamma grid");
    const auto it = std::find_if(cfg.algorithms.begin(), cfg.algorithms.end(),
                                 [&](const AlgorithmConfig& a) { return a.id == algorithm_id; });
    if (it == cfg.algorithms.end())
        throw InvalidArgument("sweep: no algorithm with id '" + algorithm_id + "'");
    if (it->kind == AlgorithmKind::Rls)
        throw InvalidArgument("sweep: algorithm '" + algorithm_id + "' has no gamma");
    for (double g : gamma_grid)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw InvalidArgument("sweep: gamma values must be nonnegative, got " + text::format_double(g));

    ExperimentConfig single = cfg;
    single.algorithms = {*it};

    SweepResult res;
    res.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
    double best_mse = std::numeric_limits<double>::infinity();
    for (double g : gamma_grid) {
        single.algorithms[0].gamma = g;
        const auto curves = run_experiment(single, threads);
        const double mse = steady_state_mse(curves.front(), window);
        res.steady_mse.push_back(mse);
        if (mse < best_mse || (mse == best_mse && g < res.best_gamma)) {
            best_mse = mse;
            res.best_gamma = g;
        }
    }
    return res;
}

AlphaCondition check_alpha_condition(std::span<const SamplePair> samples, double lambda,
                                     double alpha, double sigma2) {
    if (samples.empty()) throw InvalidArgument("check_alpha_condition: empty sample set");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in (0, 1]");
    if (!(alpha >= 0.0) || !(sigma2 >= 0.0)) throw InvalidArgument("alpha and sigma2 must be nonnegative");

    // X^T Lambda X shares its nonzero spectrum with Lambda^1/2 X X^T Lambda^1/2
    const auto m = samples.front().x.size();
    Matrix gram = Matrix::Zero(m, m);
    for (const auto& s : samples) {
        if (s.x.size() != m) throw InvalidArgument("check_alpha_condition: ragged sample set");
        gram *= lambda;
        gram.noalias() += s.x * s.x.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    AlphaCondition out;
    out.s1 = std::max(eig.eigenvalues()(m - 1), 0.0);
    out.alpha2 = alpha * alpha;
    out.alpha2_max = out.s1 > 0.0 ? sigma2 / out.s1 : std::numeric_limits<double>::infinity();
    out.satisfied = out.alpha2 == 0.0 || out.alpha2 <= out.alpha2_max;
    return out;
}

}  // namespace sparse_rls
