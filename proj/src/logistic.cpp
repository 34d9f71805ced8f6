#include "gammareg/models/logistic.hpp"

#include <cmath>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

double linear_predictor(const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& x) {
  if (theta.size() != x.size() + 1) {
    throw LengthMismatch("parameter length " + std::to_string(theta.size()) +
                         " does not match covariate dimension " +
                         std::to_string(x.size()) + " plus intercept");
  }
  return theta(0) + theta.tail(x.size()).dot(x);
}

Eigen::VectorXd with_intercept(const Eigen::VectorXd& x) {
  Eigen::VectorXd xt(x.size() + 1);
  xt(0) = 1.0;
  xt.tail(x.size()) = x;
  return xt;
}

namespace {
void check_binary(double y) {
  if (!(y == 0.0 || y == 1.0)) {
    throw UnsupportedResponse("logistic response must be 0 or 1, got " +
                              std::to_string(y));
  }
}
}  // namespace

double LogisticModel::log_density(const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& x, double y) const {
  check_binary(y);
  const double eta = clamp_eta(linear_predictor(theta, x));
  // y log π + (1-y) log(1-π), each term in stable log-sigmoid form.
  return (y == 1.0) ? log_sigmoid(eta) : log_sigmoid(-eta);
}

Eigen::VectorXd LogisticModel::log_density_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double y) const {
  check_binary(y);
  const double pi = sigmoid(linear_predictor(theta, x));
  return (y - pi) * with_intercept(x);
}

double LogisticModel::log_power_integral(const Eigen::VectorXd& theta,
                                         const Eigen::VectorXd& x,
                                         GammaParam gamma) const {
  const double eta = clamp_eta(linear_predictor(theta, x));
  const double g1 = 1.0 + gamma.value;
  // log(π^{1+γ} + (1-π)^{1+γ}) via a two-term log-sum-exp.
  return log_sum_exp2(g1 * log_sigmoid(eta), g1 * log_sigmoid(-eta));
}

Eigen::VectorXd LogisticModel::log_power_integral_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
    GammaParam gamma) const {
  const double eta = clamp_eta(linear_predictor(theta, x));
  const double g1 = 1.0 + gamma.value;
  const double lp = log_sigmoid(eta);
  const double lq = log_sigmoid(-eta);
  const double lse = log_sum_exp2(g1 * lp, g1 * lq);
  // Softmax shares of the two support points inside the power sum.
  const double a = std::exp(g1 * lp - lse);  // weight of y=1
  const double b = std::exp(g1 * lq - lse);  // weight of y=0
  const double pi = sigmoid(eta);
  // d/dη log Σ = (1+γ)[a(1-π) - bπ]; chain through η = θᵀ(1,x).
  return (g1 * (a * (1.0 - pi) - b * pi)) * with_intercept(x);
}

double LogisticModel::sample_response(const Eigen::VectorXd& theta,
                                      const Eigen::VectorXd& x,
                                      Rng& rng) const {
  const double pi = sigmoid(linear_predictor(theta, x));
  return rng.uniform() < pi ? 1.0 : 0.0;
}

bool LogisticModel::discrete_support(const Eigen::VectorXd& /*theta*/,
                                     const Eigen::VectorXd& /*x*/,
                                     std::vector<double>& ys) const {
  ys = {0.0, 1.0};
  return true;
}

Interval ConditionalModel::response_window(const Eigen::VectorXd& /*theta*/,
                                           const Eigen::VectorXd& /*x*/) const {
  throw UnsupportedResponse("response_window is defined only for models with "
                            "a continuous response");
}

const ConditionalModel& logistic_model() {
  static const LogisticModel model;
  return model;
}

}  // namespace gammareg
