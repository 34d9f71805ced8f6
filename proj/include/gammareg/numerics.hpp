#pragma once

#include <cstddef>
#include <vector>

namespace gammareg {

/// Largest |η| fed to exp() when evaluating logistic or log-linear models.
/// Keeps densities representable (e^{±700} is at the edge of double range)
/// while leaving leverage points such as η ≈ 40 exact.
inline constexpr double kEtaClamp = 700.0;

/// Deterministic fixed-tree pairwise summation: the reduction tree depends
/// only on n, so the result is bit-reproducible regardless of how the terms
/// were produced (and has O(log n) error growth instead of O(n)).
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

/// log Σ_i exp(x_i) with max-shift; returns -inf for an empty or all -inf
/// input.  Summation of the shifted exponentials is pairwise/deterministic.
double log_sum_exp(const double* x, std::size_t n);
double log_sum_exp(const std::vector<double>& x);

/// Two-term log-sum-exp, used for binary-response power integrals.
double log_sum_exp2(double a, double b);

/// η clamped to ±kEtaClamp.
double clamp_eta(double eta);

/// Numerically stable log σ(η) = -log(1+e^{-η}); clamps η first.
double log_sigmoid(double eta);

/// Numerically stable σ(η) = 1/(1+e^{-η}); clamps η first.
double sigmoid(double eta);

}  // namespace gammareg
