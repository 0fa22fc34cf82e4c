#include "sparse_rls/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

namespace {

double sgn(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

std::string fmt(double v) { return text::format_double(v); }

}  // namespace

ThresholdSpec ThresholdSpec::make(double p, double alpha, double sigma2, double gamma,
                                  double delta, double beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("threshold: alpha must be positive, got " + fmt(alpha));
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw InvalidArgument("threshold: sigma2 must be positive, got " + fmt(sigma2));
    return from_ratio(p, alpha * alpha / sigma2, gamma, delta, beta);
}

ThresholdSpec ThresholdSpec::from_ratio(double p, double alpha2_over_sigma2, double gamma,
                                        double delta, double beta) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("threshold: p must lie in [0, 1], got " + fmt(p));
    if (!(alpha2_over_sigma2 > 0.0) || !std::isfinite(alpha2_over_sigma2))
        throw InvalidArgument("threshold: alpha^2/sigma^2 must be positive, got " +
                              fmt(alpha2_over_sigma2));
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("threshold: gamma must be nonnegative, got " + fmt(gamma));
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InvalidArgument("threshold: delta must be positive, got " + fmt(delta));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("threshold: beta must be positive, got " + fmt(beta));

    ThresholdSpec s;
    s.p_ = p;
    s.ratio_ = alpha2_over_sigma2;
    s.gamma_ = gamma;
    s.delta_ = delta;
    s.beta_ = beta;

    const double scale = alpha2_over_sigma2 * gamma;
    if (p == 1.0) {
        s.t_lower_ = gamma * alpha2_over_sigma2;
        s.t_upper_ = std::numeric_limits<double>::infinity();
        s.slope_den_ = 1.0;
    } else if (p == 0.0) {
        s.t_lower_ = scale * beta;
        s.t_upper_ = 1.0 / beta;
        s.slope_den_ = 1.0 - scale * beta * beta;
    } else {
        s.t_lower_ = scale * p * std::pow(delta, p - 1.0);
        s.t_upper_ = delta / (1.0 - p);
        s.slope_den_ = 1.0 - scale * p * (1.0 - p) * std::pow(delta, p - 2.0);
    }

    if (!(s.slope_den_ > 0.0))
        throw IllPosedThreshold("threshold: slope denominator must be positive (slope_den=" +
                                fmt(s.slope_den_) + ")");
    if (!(s.t_lower_ < s.t_upper_))
        throw IllPosedThreshold("threshold: need t_lower < t_upper (t_lower=" + fmt(s.t_lower_) +
                                ", t_upper=" + fmt(s.t_upper_) + ")");
    return s;
}

double ThresholdSpec::forward(double x) const {
    if (x == 0.0) return 0.0;
    const double a = std::abs(x);
    if (p_ == 1.0) return x + t_lower_ * sgn(x);
    if (p_ == 0.0) {
        if (a > t_upper_) return x;
        return x + ratio_ * gamma_ * (beta_ * sgn(x) - beta_ * beta_ * x);
    }
    return x + ratio_ * gamma_ * p_ * sgn(x) / std::pow(a + delta_, 1.0 - p_);
}

double ThresholdSpec::apply(double x) const {
    const double a = std::abs(x);
    if (p_ == 1.0) return sgn(x) * std::max(a - t_lower_, 0.0);
    if (a <= t_lower_) return 0.0;
    if (a >= t_upper_) return x;
    // the exact middle branch never exceeds |x|; min() absorbs rounding near t_upper
    return sgn(x) * std::min((a - t_lower_) / slope_den_, a);
}

Vector ThresholdSpec::apply(const Vector& x) const {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = apply(x[i]);
    return out;
}

}  // namespace sparse_rls
