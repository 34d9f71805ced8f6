#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gammareg/quadrature.hpp"
#include "gammareg/rng.hpp"
#include "gammareg/types.hpp"

namespace gammareg {

/// A parametric conditional density family f(y|x;θ).
///
/// Conventions shared by every model:
///  - x is the raw covariate vector of length p; the intercept is an
///    implicit leading 1, so linear predictors read θ₀ + Σ_j θ_{j+1} x_j.
///  - θ is the "natural" parameter vector (param_count(p) entries).  Models
///    with constrained parameters (Gaussian σ > 0) expose a bijection to an
///    unconstrained optimizer space via the *_unconstrained hooks; the
///    default is the identity.
///  - All member functions are pure and objects are immutable, so a model
///    instance can be shared freely across threads.
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;

  virtual std::string name() const = 0;

  /// Number of free parameters for covariate dimension p.
  virtual int param_count(int p) const = 0;

  /// True if y lies in the response support (e.g. {0,1} for logistic).
  virtual bool in_support(double y) const = 0;

  /// log f(y|x;θ); throws UnsupportedResponse when !in_support(y).
  virtual double log_density(const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& x, double y) const = 0;

  /// ∇_θ log f(y|x;θ) in the natural parameterization.
  virtual Eigen::VectorXd log_density_gradient(const Eigen::VectorXd& theta,
                                               const Eigen::VectorXd& x,
                                               double y) const = 0;

  /// log ∫ f(y|x;θ)^{1+γ} dy (a log of an exact sum for discrete y).
  virtual double log_power_integral(const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& x,
                                    GammaParam gamma) const = 0;

  /// ∇_θ log ∫ f(y|x;θ)^{1+γ} dy.
  virtual Eigen::VectorXd log_power_integral_gradient(
      const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
      GammaParam gamma) const = 0;

  /// One draw from f(·|x;θ); consumes the generator deterministically.
  virtual double sample_response(const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& x, Rng& rng) const = 0;

  /// For discrete responses, fills `ys` with the support points that carry
  /// non-negligible mass at (θ, x) and returns true; returns false for
  /// continuous responses (callers then integrate over response_window).
  virtual bool discrete_support(const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& x,
                                std::vector<double>& ys) const = 0;

  /// Integration window for continuous responses (mean ± 8.5 sd); throws
  /// for discrete models.
  virtual Interval response_window(const Eigen::VectorXd& theta,
                                   const Eigen::VectorXd& x) const;

  // --- optimizer parameterization hooks -------------------------------
  virtual Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& theta) const {
    return theta;
  }
  virtual Eigen::VectorXd from_unconstrained(
      const Eigen::VectorXd& phi) const {
    return phi;
  }
  /// Chain rule: maps a natural-θ gradient to the unconstrained coordinates.
  virtual Eigen::VectorXd gradient_to_unconstrained(
      const Eigen::VectorXd& theta, const Eigen::VectorXd& grad) const {
    (void)theta;
    return grad;
  }

  // --- conveniences ---------------------------------------------------
  double density(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                 double y) const {
    return std::exp(log_density(theta, x, y));
  }
  /// ∫ f(y|x;θ)^{1+γ} dy on the natural scale.
  double power_integral(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                        GammaParam gamma) const {
    return std::exp(log_power_integral(theta, x, gamma));
  }
};

/// θ₀ + Σ_j θ_{j+1} x_j for models with a leading-intercept convention.
double linear_predictor(const Eigen::VectorXd& theta, const Eigen::VectorXd& x);

/// (1, x₁, ..., x_p): the gradient direction of a linear predictor.
Eigen::VectorXd with_intercept(const Eigen::VectorXd& x);

}  // namespace gammareg
