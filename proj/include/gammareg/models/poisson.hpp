#pragma once

#include "gammareg/model.hpp"

namespace gammareg {

/// Log-linear Poisson regression:
///   y | x ~ Poisson(λ(x;β)),   λ = exp(β₀ + xᵀβ),   y ∈ {0,1,2,...}.
/// The power sum Σ_k [λ^k e^{-λ}/k!]^{1+γ} has no closed form; it is
/// truncated at k_max = max(50, ⌈λ + 12√λ⌉) with an explicit geometric
/// tail bound (TruncationNotConverged if the bound fails).
class PoissonModel final : public ConditionalModel {
 public:
  std::string name() const override { return "poisson"; }
  int param_count(int p) const override { return p + 1; }
  bool in_support(double y) const override {
    return std::isfinite(y) && y >= 0.0 && y == std::floor(y);
  }

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

  /// Truncation cap for the power sum at rate λ.
  static int truncation_cap(double lambda);

 private:
  static double sample_response_knuth(double lambda, Rng& rng);
};

/// Shared immutable instance (models are stateless, so one suffices).
const ConditionalModel& poisson_model();

}  // namespace gammareg
