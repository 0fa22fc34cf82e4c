#pragma once

#include <limits>

#include "sparse_rls/signal_model.hpp"

namespace sparse_rls {

/// Default auxiliary parameters: alpha = sigma / 4, beta = 5, delta = 1 / beta.
inline constexpr double kDefaultAlphaOverSigma = 0.25;
inline constexpr double kDefaultBeta = 5.0;
inline constexpr double kDefaultDelta = 1.0 / kDefaultBeta;

/// Element-wise M-step operator S and its forward map S' for the
/// p-norm-like penalty. Three regimes:
///
///   p = 1      S(x) = sgn(x) (|x| - t_lower)_+,     t_lower = gamma a
///   0 < p < 1  t_lower = gamma a p delta^(p-1),      t_upper = delta / (1 - p),
///              slope_den = 1 - gamma a p (1-p) delta^(p-2)
///   p = 0      t_lower = gamma a beta,               t_upper = 1 / beta,
///              slope_den = 1 - gamma a beta^2
///
/// with a = alpha^2 / sigma^2. For p < 1, S is zero on |x| <= t_lower,
/// sgn(x)(|x| - t_lower)/slope_den strictly between the breakpoints, and the
/// identity on |x| >= t_upper.
///
/// Immutable once built; construction rejects parameter sets for which S
/// is not an increasing piecewise-linear map.
class ThresholdSpec {
public:
    /// alpha > 0 and sigma2 > 0; the map only depends on alpha^2 / sigma^2.
    static ThresholdSpec make(double p, double alpha, double sigma2, double gamma,
                              double delta, double beta);

    /// Same, parameterized directly by alpha^2 / sigma^2. This is the form
    /// used when sigma^2 may be zero and alpha is tied to sigma.
    static ThresholdSpec from_ratio(double p, double alpha2_over_sigma2, double gamma,
                                    double delta, double beta);

    double p() const { return p_; }
    double alpha2_over_sigma2() const { return ratio_; }
    double gamma() const { return gamma_; }
    double delta() const { return delta_; }
    double beta() const { return beta_; }
    double t_lower() const { return t_lower_; }
    double t_upper() const { return t_upper_; }  // +inf for p = 1
    double slope_den() const { return slope_den_; }

    /// S'(x). S'(0) = 0.
    double forward(double x) const;
    /// S(x).
    double apply(double x) const;
    Vector apply(const Vector& x) const;

    /// p = 1, gamma = 0: the identity map.
    ThresholdSpec() = default;

private:
    double p_ = 1.0;
    double ratio_ = kDefaultAlphaOverSigma * kDefaultAlphaOverSigma;
    double gamma_ = 0.0;
    double delta_ = kDefaultDelta;
    double beta_ = kDefaultBeta;
    double t_lower_ = 0.0;
    double t_upper_ = std::numeric_limits<double>::infinity();
    double slope_den_ = 1.0;
};

inline ThresholdSpec make_spec(double p, double alpha, double sigma2, double gamma,
                               double delta = kDefaultDelta, double beta = kDefaultBeta) {
    return ThresholdSpec::make(p, alpha, sigma2, gamma, delta, beta);
}

inline double s_forward(double x, const ThresholdSpec& spec) { return spec.forward(x); }
inline double s_apply(double x, const ThresholdSpec& spec) { return spec.apply(x); }
inline Vector s_apply_vec(const Vector& x, const ThresholdSpec& spec) { return spec.apply(x); }

}  // namespace sparse_rls
