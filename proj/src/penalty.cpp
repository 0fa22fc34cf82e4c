#include "sparse_rls/penalty.hpp"

#include <cmath>

#include "sparse_rls/errors.hpp"
#include "sparse_rls/text.hpp"

namespace sparse_rls {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double sgn(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("p must lie in [0, 1], got " + text::format_double(p));
}

void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("beta must be positive, got " + text::format_double(beta));
}

}  // namespace

void validate(const PenaltyKind& kind) {
    std::visit(overloaded{[](const PNormLike& k) { check_p(k.p); }, [](const L1&) {},
                          [](const L0Approx& k) { check_beta(k.beta); }},
               kind);
}

std::string describe(const PenaltyKind& kind) {
    return std::visit(
        overloaded{[](const PNormLike& k) { return "p-norm-like(p=" + text::format_double(k.p) + ")"; },
                   [](const L1&) { return std::string("l1"); },
                   [](const L0Approx& k) { return "l0-exp(beta=" + text::format_double(k.beta) + ")"; }},
        kind);
}

double p_norm_like(const Vector& w, double p) {
    check_p(p);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double a = std::abs(w[i]);
        if (a == 0.0) continue;
        sum += p == 1.0 ? a : std::pow(a, p);
    }
    return sum;
}

double l0_exp_approx(const Vector& w, double beta) {
    check_beta(beta);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) sum += -std::expm1(-beta * std::abs(w[i]));
    return sum;
}

double penalty_value(const Vector& w, const PenaltyKind& kind) {
    return std::visit(overloaded{[&](const PNormLike& k) { return p_norm_like(w, k.p); },
                                 [&](const L1&) { return w.lpNorm<1>(); },
                                 [&](const L0Approx& k) { return l0_exp_approx(w, k.beta); }},
                      kind);
}

Vector subgradient(const Vector& w, const PenaltyKind& kind) {
    validate(kind);
    Vector g(w.size());
    std::visit(overloaded{
                   [&](const L1&) {
                       for (Eigen::Index i = 0; i < w.size(); ++i) g[i] = sgn(w[i]);
                   },
                   [&](const L0Approx& k) {
                       for (Eigen::Index i = 0; i < w.size(); ++i)
                           g[i] = k.beta * sgn(w[i]) * std::exp(-k.beta * std::abs(w[i]));
                   },
                   [&](const PNormLike& k) {
                       for (Eigen::Index i = 0; i < w.size(); ++i) {
                           if (k.p == 1.0) {
                               g[i] = sgn(w[i]);
                           } else if (k.p == 0.0) {
                               // the l0 count is flat away from zero
                               g[i] = 0.0;
                           } else {
                               g[i] = k.p * sgn(w[i]) /
                                      std::pow(std::abs(w[i]) + kSubgradientDelta, 1.0 - k.p);
                           }
                       }
                   }},
               kind);
    return g;
}

}  // namespace sparse_rls
