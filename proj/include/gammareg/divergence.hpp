#pragma once

#include "gammareg/model.hpp"
#include "gammareg/types.hpp"

namespace gammareg {

/// Empirical type-1 γ-cross entropy over a dataset:
///   d̄_{γ,1} = -(1/γ) log[(1/n) Σ_i f(y_i|x_i;θ)^γ / (∫f(y|x_i;θ)^{1+γ}dy)^{γ/(1+γ)}].
/// All per-point terms are combined in log space (log-sum-exp), so leverage
/// points with density e^{-700} neither underflow nor poison the sum.
CrossEntropyValue empirical_cross_entropy_type1(const ConditionalModel& model,
                                               const Eigen::VectorXd& theta,
                                               const RegressionDataset& data,
                                               GammaParam gamma);

/// Empirical type-2 γ-cross entropy:
///   d̄_{γ,2} = -(1/γ) log[(1/n) Σ_i f(y_i|x_i;θ)^γ]
///             + (1/(1+γ)) log[(1/n) Σ_i ∫f(y|x_i;θ)^{1+γ}dy].
CrossEntropyValue empirical_cross_entropy_type2(const ConditionalModel& model,
                                               const Eigen::VectorXd& theta,
                                               const RegressionDataset& data,
                                               GammaParam gamma);

/// Dispatch on kind.
CrossEntropyValue empirical_cross_entropy(const ConditionalModel& model,
                                          const Eigen::VectorXd& theta,
                                          const RegressionDataset& data,
                                          GammaParam gamma, EntropyKind kind);

/// Monotone transform d̃ = -exp(-γ d): order-preserving, so the argmin over
/// θ is unchanged; the transformed value lies in (-∞, 0).
CrossEntropyValue transformed_cross_entropy(const CrossEntropyValue& d,
                                            GammaParam gamma);

/// Objective value plus analytic ∇_θ (natural parameterization) in one
/// pass; this is what the optimizer consumes.
struct ObjectiveEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

ObjectiveEval empirical_objective_with_gradient(const ConditionalModel& model,
                                                const Eigen::VectorXd& theta,
                                                const RegressionDataset& data,
                                                GammaParam gamma,
                                                EntropyKind kind);

}  // namespace gammareg
