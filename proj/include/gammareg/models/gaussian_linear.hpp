#pragma once

#include <optional>

#include "gammareg/model.hpp"

namespace gammareg {

/// Homoscedastic Gaussian linear regression, the location-scale family
///   f(y|x;θ) = (1/σ) s((y - q(x;ζ))/σ),   s = standard normal,
///   q(x;ζ) = ζ₀ + xᵀζ  (linear location only).
///
/// Because σ does not depend on x the power integral
///   ∫ f^{1+γ} dy = (2πσ²)^{-γ/2} (1+γ)^{-1/2}
/// is covariate-free, which is exactly the condition under which the two
/// γ-cross-entropy types share their minimizer.
///
/// Parameterizations:
///  - free σ (default): θ = (ζ₀..ζ_p, σ), p+2 entries; the optimizer hooks
///    map σ to log σ so positivity needs no constraint handling.
///  - fixed σ: construct with the known scale; θ = ζ only (p+1 entries).
class GaussianLinearModel final : public ConditionalModel {
 public:
  GaussianLinearModel() = default;
  explicit GaussianLinearModel(double fixed_sigma);

  std::string name() const override { return "gaussian"; }
  int param_count(int p) const override {
    return fixed_sigma_ ? p + 1 : p + 2;
  }
  bool in_support(double y) const override { return std::isfinite(y); }

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
  Interval response_window(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& x) const override;

  Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd from_unconstrained(
      const Eigen::VectorXd& phi) const override;
  Eigen::VectorXd gradient_to_unconstrained(
      const Eigen::VectorXd& theta, const Eigen::VectorXd& grad) const override;

  bool sigma_is_fixed() const { return fixed_sigma_.has_value(); }

  /// Location q(x;ζ) and scale σ extracted from θ per the parameterization.
  double location(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const;
  double scale(const Eigen::VectorXd& theta) const;

 private:
  std::optional<double> fixed_sigma_;
};

/// Shared immutable instance with σ fixed at 1 (the location-only family
/// used by the population scenarios).
const ConditionalModel& gaussian_unit_sigma_model();

}  // namespace gammareg
