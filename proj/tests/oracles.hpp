#pragma once

// Independent reference computations for the tests. Nothing here calls the
// recursive code paths it is used to check.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sparse_rls/signal_model.hpp"

namespace oracle {

using sparse_rls::Matrix;
using sparse_rls::SamplePair;
using sparse_rls::Vector;

/// Rows x(1)^T ... x(n)^T.
inline Matrix stack_x(const std::vector<SamplePair>& s) {
    Matrix x(static_cast<Eigen::Index>(s.size()), s.front().x.size());
    for (std::size_t i = 0; i < s.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = s[i].x.transpose();
    return x;
}

inline Vector stack_d(const std::vector<SamplePair>& s) {
    Vector d(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) d[static_cast<Eigen::Index>(i)] = s[i].d;
    return d;
}

/// diag(lambda^(n-1), ..., lambda, 1)
inline Vector forgetting_weights(std::size_t n, double lambda) {
    Vector w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) w[static_cast<Eigen::Index>(i)] = std::pow(lambda, static_cast<double>(n - 1 - i));
    return w;
}

/// X^T Lambda X
inline Matrix weighted_gram(const std::vector<SamplePair>& s, double lambda) {
    const Matrix x = stack_x(s);
    return x.transpose() * forgetting_weights(s.size(), lambda).asDiagonal() * x;
}

/// X^T Lambda d
inline Vector weighted_cross(const std::vector<SamplePair>& s, double lambda) {
    return stack_x(s).transpose() * forgetting_weights(s.size(), lambda).asDiagonal() * stack_d(s);
}

/// lambda^n rho I + X^T Lambda X, the inverse of P(n) for P(0) = I / rho.
inline Matrix regularized_gram(const std::vector<SamplePair>& s, double lambda, double rho) {
    const auto m = s.front().x.size();
    return std::pow(lambda, static_cast<double>(s.size())) * rho * Matrix::Identity(m, m) + weighted_gram(s, lambda);
}

/// Closed-form exponentially weighted, rho-regularized least squares.
inline Vector batch_rls(const std::vector<SamplePair>& s, double lambda, double rho) {
    return regularized_gram(s, lambda, rho).fullPivLu().solve(weighted_cross(s, lambda));
}

inline double rel_err(const Matrix& got, const Matrix& want) {
    const double scale = std::max(want.norm(), 1e-300);
    return (got - want).norm() / scale;
}

/// p = 1 M-step written directly from its closed form.
inline double soft_threshold(double x, double tau) {
    const double mag = std::abs(x) - tau;
    if (mag <= 0.0) return 0.0;
    return x > 0.0 ? mag : -mag;
}

}  // namespace oracle
