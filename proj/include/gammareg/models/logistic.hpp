#pragma once

#include "gammareg/model.hpp"

namespace gammareg {

/// Binary logistic regression:
///   Pr(y=1|x) = π(x;β) = σ(β₀ + xᵀβ),   y ∈ {0,1}.
/// θ = β has p+1 entries.  The power integral has the closed form
///   ∫ f^{1+γ} dy = π^{1+γ} + (1-π)^{1+γ},
/// which depends on x, so the two γ-cross-entropy types genuinely differ.
class LogisticModel final : public ConditionalModel {
 public:
  std::string name() const override { return "logistic"; }
  int param_count(int p) const override { return p + 1; }
  bool in_support(double y) const override { return y == 0.0 || y == 1.0; }

  double log_density(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                     double y) const override;
  Eigen::VectorXd log_density_gradient(const Eigen::VectorXd& theta,
                                       const Eigen::VectorXd& x,
                                       double y) const override;
  double log_power_integral(const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& x,
                            GammaParam gamma) const override;
  Eigen::VectorXd log_power_integral_gradient(const Eigen::VectorXd& theta,
                                              const Eigen::VectorXd& x,
                                              GammaParam gamma) const override;
  double sample_response(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                         Rng& rng) const override;
  bool discrete_support(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                        std::vector<double>& ys) const override;
};

/// Shared immutable instance (models are stateless, so one suffices).
const ConditionalModel& logistic_model();

}  // namespace gammareg
