#include "gammareg/models/poisson.hpp"

#include <cmath>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

namespace {

constexpr int kHardCap = 10'000'000;

double rate(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
  return std::exp(clamp_eta(linear_predictor(theta, x)));
}

void check_count(double y) {
  if (!(std::isfinite(y) && y >= 0.0 && y == std::floor(y))) {
    throw UnsupportedResponse("poisson response must be a nonnegative "
                              "integer, got " + std::to_string(y));
  }
}

/// log pmf of Poisson(λ) at integer k, via kη - e^η - log k! with η = log λ.
double log_pmf(double k, double log_lambda, double lambda) {
  return k * log_lambda - lambda - std::lgamma(k + 1.0);
}

}  // namespace

int PoissonModel::truncation_cap(double lambda) {
  const double cap = std::max(50.0, std::ceil(lambda + 12.0 * std::sqrt(lambda)));
  if (!(cap < kHardCap)) {
    throw TruncationNotConverged(
        "poisson power sum needs more than 1e7 terms (lambda = " +
        std::to_string(lambda) + ")");
  }
  return static_cast<int>(cap);
}

double PoissonModel::log_density(const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& x, double y) const {
  check_count(y);
  const double eta = clamp_eta(linear_predictor(theta, x));
  return y * eta - std::exp(eta) - std::lgamma(y + 1.0);
}

Eigen::VectorXd PoissonModel::log_density_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double y) const {
  check_count(y);
  return (y - rate(theta, x)) * with_intercept(x);
}

double PoissonModel::log_power_integral(const Eigen::VectorXd& theta,
                                        const Eigen::VectorXd& x,
                                        GammaParam gamma) const {
  const double lambda = rate(theta, x);
  const double log_lambda = std::log(lambda);
  const double g1 = 1.0 + gamma.value;
  const int cap = truncation_cap(lambda);
  std::vector<double> terms(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    terms[k] = g1 * log_pmf(k, log_lambda, lambda);
  }
  const double lse = log_sum_exp(terms);
  // Geometric tail bound: past the cap the term ratio is at most
  // r = (λ/(cap+1))^{1+γ} < 1, so the tail is ≤ term_cap · r/(1-r).
  const double log_r = g1 * (log_lambda - std::log(cap + 1.0));
  const double r = std::exp(log_r);
  if (!(r < 1.0)) {
    throw TruncationNotConverged("poisson tail ratio not contracting at cap");
  }
  const double log_tail = terms[cap] + log_r - std::log1p(-r);
  if (log_tail > lse + std::log(1e-12)) {
    throw TruncationNotConverged("poisson power-sum tail bound exceeds "
                                 "tolerance at the truncation cap");
  }
  return lse;
}

Eigen::VectorXd PoissonModel::log_power_integral_gradient(
    const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
    GammaParam gamma) const {
  const double lambda = rate(theta, x);
  const double log_lambda = std::log(lambda);
  const double g1 = 1.0 + gamma.value;
  const int cap = truncation_cap(lambda);
  std::vector<double> terms(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    terms[k] = g1 * log_pmf(k, log_lambda, lambda);
  }
  const double lse = log_sum_exp(terms);
  // d/dη log Σ_k e^{(1+γ) log pmf_k} = (1+γ) Σ_k w_k (k - λ),
  // with w_k the softmax weights of the power terms.
  std::vector<double> weighted(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    weighted[k] = std::exp(terms[k] - lse) * (k - lambda);
  }
  return (g1 * pairwise_sum(weighted)) * with_intercept(x);
}

double PoissonModel::sample_response(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& x,
                                     Rng& rng) const {
  double lambda = rate(theta, x);
  // Knuth's product-of-uniforms method, exact for moderate λ; larger rates
  // are split using Poisson additivity to keep e^{-λ} representable.
  double total = 0.0;
  while (lambda > 500.0) {
    const double half = lambda / 2.0;
    total += sample_response_knuth(half, rng);
    lambda -= half;
  }
  return total + sample_response_knuth(lambda, rng);
}

double PoissonModel::sample_response_knuth(double lambda, Rng& rng) {
  const double limit = std::exp(-lambda);
  double product = rng.uniform();
  double k = 0.0;
  while (product > limit) {
    product *= rng.uniform();
    k += 1.0;
  }
  return k;
}

bool PoissonModel::discrete_support(const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& x,
                                    std::vector<double>& ys) const {
  const int cap = truncation_cap(rate(theta, x));
  ys.resize(cap + 1);
  for (int k = 0; k <= cap; ++k) ys[k] = k;
  return true;
}

const ConditionalModel& poisson_model() {
  static const PoissonModel model;
  return model;
}

}  // namespace gammareg
