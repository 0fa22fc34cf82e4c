#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparse_rls/filters.hpp"

namespace sparse_rls {

enum class AlgorithmKind { Rls, CrRls, EmRls };

std::string_view to_string(AlgorithmKind kind);
std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view s);

/// One estimator in an experiment. Fields irrelevant to `kind` are ignored.
struct AlgorithmConfig {
    std::string id;
    AlgorithmKind kind = AlgorithmKind::Rls;

    // RLS / CR-RLS
    std::optional<double> rho;  // default 2 / m
    PenaltyKind penalty = L1{};

    // CR-RLS / EM
    double gamma = 0.0;

    // EM
    double p = 1.0;
    double alpha_over_sigma = kDefaultAlphaOverSigma;
    double beta = kDefaultBeta;
    double delta = kDefaultDelta;
    int k_iters = 1;
    EStepMode e_step = EStepMode::SupportRestricted;

    double rho_for(std::size_t m) const { return rho ? *rho : 2.0 / static_cast<double>(m); }
    ThresholdSpec threshold_spec() const;
    void validate(std::size_t m) const;
};

std::unique_ptr<AdaptiveFilter> make_filter(const AlgorithmConfig& algo, std::size_t m,
                                            double lambda);

struct ExperimentConfig {
    std::size_t m = 100;
    std::size_t r_true = 10;
    double noise_variance = 0.005;
    std::optional<double> input_variance;  // default 1 / m
    double lambda = 0.999;
    std::size_t n_iters = 2000;
    std::size_t n_trials = 20;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
    std::vector<AlgorithmConfig> algorithms;

    double input_variance_or_default() const {
        return input_variance ? *input_variance : 1.0 / static_cast<double>(m);
    }
    std::size_t default_window() const { return n_iters >= 10 ? n_iters / 10 : 1; }
    void validate() const;
};

struct LearningCurve {
    std::string algorithm_id;
    std::vector<double> mse;  // trial average of ||w(n) - w||^2, n = 1..n_iters
    std::size_t trials = 0;
};

struct SweepResult {
    std::vector<double> gamma_grid;
    std::vector<double> steady_mse;
    double best_gamma = 0.0;
};

/// The system drawn for `trial`; the sample stream uses a sibling substream.
SparseSystem trial_system(const ExperimentConfig& cfg, std::size_t trial);
SampleStream trial_stream(const ExperimentConfig& cfg, std::size_t trial);

/// Per-iteration squared deviation of each configured algorithm for one trial.
std::vector<std::vector<double>> run_trial(const ExperimentConfig& cfg, std::size_t trial);

/// Runs every trial (in parallel when threads > 1) and averages in trial
/// order, so the result does not depend on the thread count.
std::vector<LearningCurve> run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

double steady_state_mse(const LearningCurve& curve, std::size_t window);

/// Runs `algorithm_id` alone once per gamma with the same seed.
/// Ties resolve toward the smaller gamma.
SweepResult sweep_gamma(const ExperimentConfig& cfg, const std::string& algorithm_id,
                        std::span<const double> gamma_grid, std::size_t window,
                        unsigned threads = 1);

struct AlphaCondition {
    bool satisfied = false;
    double s1 = 0.0;        // largest eigenvalue of Lambda^1/2 X X^T Lambda^1/2
    double alpha2 = 0.0;
    double alpha2_max = 0.0;  // sigma2 / s1
};

/// Offline check of alpha^2 <= sigma^2 / s1 over a recorded sample set.
AlphaCondition check_alpha_condition(std::span<const SamplePair> samples, double lambda,
                                     double alpha, double sigma2);

}  // namespace sparse_rls
