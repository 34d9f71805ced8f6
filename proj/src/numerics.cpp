#include "gammareg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gammareg {

namespace {
constexpr std::size_t kPairwiseBase = 8;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= kPairwiseBase) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

double log_sum_exp(const double* x, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  if (!std::isfinite(m)) return m;  // all -inf (or a stray +inf propagates)
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = std::exp(x[i] - m);
  return m + std::log(pairwise_sum(shifted));
}

double log_sum_exp(const std::vector<double>& x) {
  return log_sum_exp(x.data(), x.size());
}

double log_sum_exp2(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double clamp_eta(double eta) {
  return std::clamp(eta, -kEtaClamp, kEtaClamp);
}

double log_sigmoid(double eta) {
  eta = clamp_eta(eta);
  // -log(1+e^{-η}) for η ≥ 0,  η - log(1+e^{η}) otherwise.
  if (eta >= 0.0) return -std::log1p(std::exp(-eta));
  return eta - std::log1p(std::exp(eta));
}

double sigmoid(double eta) {
  eta = clamp_eta(eta);
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace gammareg
