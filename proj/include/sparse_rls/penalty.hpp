#pragma once

#include <string>
#include <variant>

#include "sparse_rls/signal_model.hpp"

namespace sparse_rls {

/// Sum |w_i|^p for 0 <= p <= 1.
struct PNormLike {
    double p = 1.0;
};
struct L1 {};
/// Sum (1 - exp(-beta |w_i|)), a smooth stand-in for the l0 count.
struct L0Approx {
    double beta = 5.0;
};

using PenaltyKind = std::variant<PNormLike, L1, L0Approx>;

void validate(const PenaltyKind& kind);
std::string describe(const PenaltyKind& kind);

/// Regularizer for the 0 < p < 1 subgradient, which is singular at zero.
inline constexpr double kSubgradientDelta = 1e-8;

/// |0|^0 is taken as 0, so p = 0 counts nonzeros and p = 1 is the l1 norm.
double p_norm_like(const Vector& w, double p);

double l0_exp_approx(const Vector& w, double beta);

double penalty_value(const Vector& w, const PenaltyKind& kind);

/// Element-wise subgradient with sgn(0) = 0.
///   L1:          sgn(w)
///   L0Approx:    beta sgn(w) exp(-beta |w|)
///   PNormLike p: p sgn(w) / (|w| + kSubgradientDelta)^(1-p)   (p = 1 is L1, p = 0 is zero)
Vector subgradient(const Vector& w, const PenaltyKind& kind);

}  // namespace sparse_rls
