#include "gammareg/models/gaussian_linear.hpp"

#include <cmath>

#include "gammareg/errors.hpp"

namespace gammareg {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2π)
constexpr double kWindowSds = 8.5;
}  // namespace

GaussianLinearModel::GaussianLinearModel(double fixed_sigma)
    : fixed_sigma_(fixed_sigma) {
  if (!(fixed_sigma > 0.0) || !std::isfinite(fixed_sigma)) {
    throw ConfigError("fixed sigma must be a finite positive real");
  }
}

double GaussianLinearModel::location(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& x) const {
  const int pc = param_count(static_cast<int>(x.size()));
  if (theta.size() != pc) {
    throw LengthMismatch("gaussian parameter length " +
                         std::to_string(theta.size()) + ", expected " +
                         std::to_string(pc));
  }
  return theta(0) + theta.segment(1, x.size()).dot(x);
}

double GaussianLinearModel::scale(const Eigen::VectorXd& theta) const {
  const double sigma = fixed_sigma_ ? *fixed_sigma_ : theta(theta.size() - 1);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("gaussian scale must be positive and finite, got " +
                      std::to_string(sigma));
  }
  return sigma;
}

double GaussianLinearModel::log_density(const Eigen::VectorXd& theta,
                                        const Eigen::VectorXd& x,
                                        double y) const {
  if (!in_support(y)) {
    throw UnsupportedResponse("gaussian response must be finite");
  }
  const double sigma = scale(theta);
  const double z = (y - location(theta, x)) / sigma;
  return -0.5 * kLogTwoPi - std::log(sigma) - 0.5 * z * z;
}

Eigen::VectorXd GaussianLinearModel::log_density_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double y) const {
  if (!in_support(y)) {
    throw UnsupportedResponse("gaussian response must be finite");
  }
  const double sigma = scale(theta);
  const double r = y - location(theta, x);
  Eigen::VectorXd grad(theta.size());
  // ∂/∂ζ = (y-q)/σ² · (1,x);  ∂/∂σ = -1/σ + (y-q)²/σ³.
  grad.head(x.size() + 1) = (r / (sigma * sigma)) * with_intercept(x);
  if (!fixed_sigma_) {
    grad(theta.size() - 1) = -1.0 / sigma + r * r / (sigma * sigma * sigma);
  }
  return grad;
}

double GaussianLinearModel::log_power_integral(const Eigen::VectorXd& theta,
                                               const Eigen::VectorXd& /*x*/,
                                               GammaParam gamma) const {
  const double sigma = scale(theta);
  const double g = gamma.value;
  // (2πσ²)^{-γ/2} (1+γ)^{-1/2}: independent of x (homoscedastic family).
  return -0.5 * g * (kLogTwoPi + 2.0 * std::log(sigma)) -
         0.5 * std::log1p(g);
}

Eigen::VectorXd GaussianLinearModel::log_power_integral_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& /*x*/,
    GammaParam gamma) const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  if (!fixed_sigma_) {
    grad(theta.size() - 1) = -gamma.value / scale(theta);  // ∂/∂σ (-γ log σ)
  }
  return grad;
}

double GaussianLinearModel::sample_response(const Eigen::VectorXd& theta,
                                            const Eigen::VectorXd& x,
                                            Rng& rng) const {
  return rng.normal(location(theta, x), scale(theta));
}

bool GaussianLinearModel::discrete_support(const Eigen::VectorXd& /*theta*/,
                                           const Eigen::VectorXd& /*x*/,
                                           std::vector<double>& /*ys*/) const {
  return false;
}

Interval GaussianLinearModel::response_window(const Eigen::VectorXd& theta,
                                              const Eigen::VectorXd& x) const {
  const double q = location(theta, x);
  const double sigma = scale(theta);
  return {q - kWindowSds * sigma, q + kWindowSds * sigma};
}

Eigen::VectorXd GaussianLinearModel::to_unconstrained(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd phi = theta;
  if (!fixed_sigma_) phi(phi.size() - 1) = std::log(scale(theta));
  return phi;
}

Eigen::VectorXd GaussianLinearModel::from_unconstrained(
    const Eigen::VectorXd& phi) const {
  Eigen::VectorXd theta = phi;
  if (!fixed_sigma_) theta(theta.size() - 1) = std::exp(phi(phi.size() - 1));
  return theta;
}

Eigen::VectorXd GaussianLinearModel::gradient_to_unconstrained(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& grad) const {
  Eigen::VectorXd out = grad;
  if (!fixed_sigma_) {
    // dσ/d(log σ) = σ.
    out(out.size() - 1) *= scale(theta);
  }
  return out;
}

const ConditionalModel& gaussian_unit_sigma_model() {
  static const GaussianLinearModel model(1.0);
  return model;
}

}  // namespace gammareg
