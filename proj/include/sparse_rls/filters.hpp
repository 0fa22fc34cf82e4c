#pragma once

#include <memory>
#include <optional>
#include <string>

#include "sparse_rls/penalty.hpp"
#include "sparse_rls/signal_model.hpp"
#include "sparse_rls/thresholding.hpp"

namespace sparse_rls {

struct StepOutput {
    double xi = 0.0;  // a-priori error d(n) - x(n)^T w(n-1)
    Vector w_hat;     // posterior estimate w(n)
};

// ---------------------------------------------------------------------------
// RLS and convex-regularized RLS (CR-RLS)

/// State of RLS / CR-RLS. gamma = 0 (or no penalty) is classic RLS.
struct RlsState {
    Vector w_hat;
    Matrix p_mat;
    double lambda = 1.0;
    double gamma = 0.0;
    std::optional<PenaltyKind> penalty;
    double rho = 1.0;
    long n = 0;
};

/// w(0) = 0, P(0) = I / rho.
RlsState rls_init(std::size_t m, double lambda, double rho, double gamma = 0.0,
                  std::optional<PenaltyKind> penalty = std::nullopt);

/// One step:
///   k    = P x / (lambda + x^T P x)
///   xi   = d - x^T w
///   P   <- (P - k x^T P) / lambda
///   w   <- w + k xi - gamma (1 - lambda) P grad g(w_prev)
/// P is re-symmetrized afterwards.
StepOutput rls_step(RlsState& state, const SamplePair& sample);

// ---------------------------------------------------------------------------
// EM p-norm-like RLS

enum class EStepMode {
    SupportRestricted,  // B w computed from the columns on supp(w)
    Dense,              // plain dense product; reference path
};

struct EmRlsState {
    Vector w_hat;
    Matrix b_mat;  // I - a X^T Lambda X,   a = alpha^2 / sigma^2
    Vector u_vec;  // a X^T Lambda d
    double lambda = 1.0;
    ThresholdSpec spec;
    int k_iters = 1;
    EStepMode mode = EStepMode::SupportRestricted;
    long n = 0;
};

/// B(1) = I - a x x^T, u(1) = a d x, w(1) = 0.
EmRlsState em_init(const SamplePair& first_sample, const ThresholdSpec& spec, double lambda,
                   int k_iters, EStepMode mode = EStepMode::SupportRestricted);

/// B <- lambda B - a x x^T + (1 - lambda) I;  u <- lambda u + a d x;
/// w <- em_iterate(B, u, w, K).
StepOutput em_step(EmRlsState& state, const SamplePair& sample);

/// K iterations of r = B w + u, w = S(r).
Vector em_iterate(const Matrix& b_mat, const Vector& u_vec, const Vector& w_start, int k_iters,
                  const ThresholdSpec& spec, EStepMode mode = EStepMode::SupportRestricted);

/// B w using only the columns of B on the nonzero entries of w.
Vector support_product(const Matrix& b_mat, const Vector& w);

// ---------------------------------------------------------------------------
// Uniform access for the harness

class AdaptiveFilter {
public:
    virtual ~AdaptiveFilter() = default;

    virtual StepOutput step(const SamplePair& sample) = 0;
    virtual const Vector& weights() const = 0;
    virtual long steps() const = 0;
    virtual std::size_t m() const = 0;
};

class RlsFilter final : public AdaptiveFilter {
public:
    RlsFilter(std::size_t m, double lambda, double rho, double gamma = 0.0,
              std::optional<PenaltyKind> penalty = std::nullopt);

    StepOutput step(const SamplePair& sample) override;
    const Vector& weights() const override { return state_.w_hat; }
    long steps() const override { return state_.n; }
    std::size_t m() const override { return static_cast<std::size_t>(state_.w_hat.size()); }

    const RlsState& state() const { return state_; }

private:
    RlsState state_;
};

/// The first step consumes the sample as the B(1)/u(1) initialization and
/// leaves w(1) = 0; later steps run em_step.
class EmRlsFilter final : public AdaptiveFilter {
public:
    EmRlsFilter(std::size_t m, const ThresholdSpec& spec, double lambda, int k_iters = 1,
                EStepMode mode = EStepMode::SupportRestricted);

    StepOutput step(const SamplePair& sample) override;
    const Vector& weights() const override;
    long steps() const override { return state_ ? state_->n : 0; }
    std::size_t m() const override { return m_; }

    const std::optional<EmRlsState>& state() const { return state_; }

private:
    std::size_t m_;
    ThresholdSpec spec_;
    double lambda_;
    int k_iters_;
    EStepMode mode_;
    Vector zero_;
    std::optional<EmRlsState> state_;
};

}  // namespace sparse_rls
