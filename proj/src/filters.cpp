#include "sparse_rls/filters.hpp"

#include <cmath>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw InvalidArgument("lambda must lie in (0, 1], got " + text::format_double(lambda));
}

void check_length(const SamplePair& sample, Eigen::Index m) {
    if (sample.x.size() != m)
        throw InvalidArgument("sample regressor has length " + std::to_string(sample.x.size()) +
                              ", filter expects " + std::to_string(m));
}

void symmetrize(Matrix& a) { a = (0.5 * (a + a.transpose())).eval(); }

void check_finite(double xi, const Vector& w, long n) {
    if (!std::isfinite(xi)) throw NumericFailure("non-finite a-priori error", NumericFailure::at_iteration(n));
    if (!w.allFinite()) throw NumericFailure("non-finite weight estimate", NumericFailure::at_iteration(n));
}

}  // namespace

RlsState rls_init(std::size_t m, double lambda, double rho, double gamma,
                  std::optional<PenaltyKind> penalty) {
    if (m == 0) throw InvalidArgument("rls_init: m must be positive");
    check_lambda(lambda);
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw InvalidArgument("rls_init: rho must be positive, got " + text::format_double(rho));
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("rls_init: gamma must be nonnegative, got " + text::format_double(gamma));
    if (penalty) validate(*penalty);
    if (gamma > 0.0 && !penalty) throw InvalidArgument("rls_init: gamma > 0 needs a penalty");

    const auto mi = static_cast<Eigen::Index>(m);
    RlsState s;
    s.w_hat = Vector::Zero(mi);
    s.p_mat = Matrix::Identity(mi, mi) / rho;
    s.lambda = lambda;
    s.gamma = gamma;
    s.penalty = std::move(penalty);
    s.rho = rho;
    return s;
}

StepOutput rls_step(RlsState& s, const SamplePair& sample) {
    check_length(sample, s.w_hat.size());
    const long n = s.n + 1;
    const Vector& x = sample.x;

    const Vector px = s.p_mat * x;
    const double denom = s.lambda + x.dot(px);
    if (!(denom > 0.0) || !std::isfinite(denom))
        throw NumericFailure("gain denominator is " + text::format_double(denom), NumericFailure::at_iteration(n));
    const Vector k = px / denom;
    const double xi = sample.d - x.dot(s.w_hat);

    // x^T P(n-1) = (P(n-1) x)^T since P is kept symmetric
    s.p_mat.noalias() -= k * px.transpose();
    s.p_mat /= s.lambda;
    symmetrize(s.p_mat);

    if (s.gamma != 0.0) {
        const Vector grad = subgradient(s.w_hat, *s.penalty);
        s.w_hat += k * xi;
        s.w_hat.noalias() -= (s.gamma * (1.0 - s.lambda)) * (s.p_mat * grad);
    } else {
        s.w_hat += k * xi;
    }

    check_finite(xi, s.w_hat, n);
    s.n = n;
    return {xi, s.w_hat};
}

EmRlsState em_init(const SamplePair& first, const ThresholdSpec& spec, double lambda, int k_iters,
                   EStepMode mode) {
    check_lambda(lambda);
    if (k_iters < 1) throw InvalidArgument("em_init: K must be at least 1");
    const auto m = first.x.size();
    if (m == 0) throw InvalidArgument("em_init: empty regressor");

    const double a = spec.alpha2_over_sigma2();
    EmRlsState s;
    s.b_mat = Matrix::Identity(m, m);
    s.b_mat.noalias() -= a * (first.x * first.x.transpose());
    symmetrize(s.b_mat);
    s.u_vec = (a * first.d) * first.x;
    s.w_hat = Vector::Zero(m);
    s.lambda = lambda;
    s.spec = spec;
    s.k_iters = k_iters;
    s.mode = mode;
    s.n = 1;
    if (!s.b_mat.allFinite() || !s.u_vec.allFinite())
        throw NumericFailure("non-finite initial B/u", NumericFailure::at_iteration(1));
    return s;
}

StepOutput em_step(EmRlsState& s, const SamplePair& sample) {
    check_length(sample, s.w_hat.size());
    const long n = s.n + 1;
    const Vector& x = sample.x;
    const double a = s.spec.alpha2_over_sigma2();

    s.b_mat *= s.lambda;
    s.b_mat.noalias() -= a * (x * x.transpose());
    s.b_mat.diagonal().array() += 1.0 - s.lambda;
    symmetrize(s.b_mat);
    s.u_vec = s.lambda * s.u_vec + (a * sample.d) * x;

    const double xi = sample.d - x.dot(s.w_hat);
    s.w_hat = em_iterate(s.b_mat, s.u_vec, s.w_hat, s.k_iters, s.spec, s.mode);

    check_finite(xi, s.w_hat, n);
    s.n = n;
    return {xi, s.w_hat};
}

Vector support_product(const Matrix& b_mat, const Vector& w) {
    Vector r = Vector::Zero(b_mat.rows());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (w[j] != 0.0) r.noalias() += b_mat.col(j) * w[j];
    }
    return r;
}

Vector em_iterate(const Matrix& b_mat, const Vector& u_vec, const Vector& w_start, int k_iters,
                  const ThresholdSpec& spec, EStepMode mode) {
    if (b_mat.rows() != b_mat.cols() || b_mat.rows() != u_vec.size() || u_vec.size() != w_start.size())
        throw InvalidArgument("em_iterate: dimension mismatch");
    if (k_iters < 1) throw InvalidArgument("em_iterate: K must be at least 1");

    Vector w = w_start;
    for (int l = 0; l < k_iters; ++l) {
        Vector r = mode == EStepMode::Dense ? Vector(b_mat * w) : support_product(b_mat, w);
        r += u_vec;
        w = spec.apply(r);
    }
    return w;
}

RlsFilter::RlsFilter(std::size_t m, double lambda, double rho, double gamma,
                     std::optional<PenaltyKind> penalty)
    : state_(rls_init(m, lambda, rho, gamma, std::move(penalty))) {}

StepOutput RlsFilter::step(const SamplePair& sample) { return rls_step(state_, sample); }

EmRlsFilter::EmRlsFilter(std::size_t m, const ThresholdSpec& spec, double lambda, int k_iters,
                         EStepMode mode)
    : m_(m), spec_(spec), lambda_(lambda), k_iters_(k_iters), mode_(mode),
      zero_(Vector::Zero(static_cast<Eigen::Index>(m))) {
    if (m == 0) throw InvalidArgument("EmRlsFilter: m must be positive");
    check_lambda(lambda);
    if (k_iters < 1) throw InvalidArgument("EmRlsFilter: K must be at least 1");
}

StepOutput EmRlsFilter::step(const SamplePair& sample) {
    if (!state_) {
        check_length(sample, static_cast<Eigen::Index>(m_));
        state_ = em_init(sample, spec_, lambda_, k_iters_, mode_);
        return {sample.d, state_->w_hat};
    }
    return em_step(*state_, sample);
}

const Vector& EmRlsFilter::weights() const { return state_ ? state_->w_hat : zero_; }

}  // namespace sparse_rls
