#include "gammareg/contamination.hpp"

#include <cmath>
#include <string>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"
#include "gammareg/rng.hpp"

namespace gammareg {

namespace {

void validate(const ContaminationScheme& scheme, const CovariateSpec& cov) {
  if (cov.p < 0) throw ConfigError("covariate count must be >= 0");
  if (!(std::abs(cov.rho) < 1.0)) {
    throw ConfigError("covariate correlation must satisfy |rho| < 1");
  }
  if (cov.mean.size() != 0 && cov.mean.size() != cov.p) {
    throw ConfigError("covariate mean length does not match p");
  }
  if (!(scheme.outlier_ratio >= 0.0 && scheme.outlier_ratio < 1.0)) {
    throw ConfigError("outlier ratio must lie in [0, 1)");
  }
  if (scheme.region) {
    if (!(scheme.region->rate >= 0.0 && scheme.region->rate < 1.0)) {
      throw ConfigError("region outlier rate must lie in [0, 1)");
    }
    if (scheme.region->coord < 0 || scheme.region->coord >= cov.p) {
      throw ConfigError("region coordinate out of range");
    }
  }
  if (!std::isfinite(scheme.outlier_response)) {
    throw ConfigError("outlier response must be finite");
  }
}

bool is_leverage(const ContaminationScheme& scheme) {
  return scheme.mode == ContaminationMode::Heterogeneous && !scheme.region;
}

void validate_leverage(const ContaminationScheme& scheme,
                       const CovariateSpec& cov) {
  if (scheme.outlier_mean.size() != cov.p) {
    throw ConfigError("outlier covariate mean length does not match p");
  }
  if (!scheme.outlier_mean.allFinite() || !(scheme.outlier_sd > 0.0)) {
    throw ConfigError("outlier covariate distribution is invalid");
  }
}

double region_eps(const ContaminationScheme& scheme,
                  const Eigen::VectorXd& x) {
  if (scheme.mode == ContaminationMode::Homogeneous) {
    return scheme.outlier_ratio;
  }
  if (scheme.region) {
    return x(scheme.region->coord) > scheme.region->cut ? scheme.region->rate
                                                        : 0.0;
  }
  return scheme.outlier_ratio;  // leverage: constant mixing weight
}

}  // namespace

Eigen::MatrixXd CovariateSpec::covariance() const {
  Eigen::MatrixXd sigma(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      sigma(i, j) = std::pow(rho, std::abs(i - j));
    }
  }
  return sigma;
}

Eigen::VectorXd CovariateSpec::mean_or_zero() const {
  return mean.size() == p ? mean : Eigen::VectorXd::Zero(p);
}

GeneratedData generate(const ConditionalModel& model,
                       const ContaminationScheme& scheme,
                       const CovariateSpec& cov, int n, std::uint64_t seed) {
  validate(scheme, cov);
  if (n < 1) throw ConfigError("need at least one row");
  const int p = cov.p;
  if (scheme.clean_theta.size() != model.param_count(p)) {
    throw ConfigError("clean parameter length does not match " + model.name() +
                      " with p = " + std::to_string(p));
  }
  const bool leverage = is_leverage(scheme);
  if (leverage && scheme.outlier_ratio > 0.0) validate_leverage(scheme, cov);
  const double total_rate =
      scheme.region ? scheme.region->rate : scheme.outlier_ratio;
  if (total_rate > 0.0 && !model.in_support(scheme.outlier_response)) {
    throw ConfigError("outlier response lies outside the " + model.name() +
                      " support");
  }

  Eigen::MatrixXd chol;
  if (p > 0) {
    const Eigen::LLT<Eigen::MatrixXd> llt(cov.covariance());
    if (llt.info() != Eigen::Success) {
      throw ConfigError("covariate covariance is not positive definite");
    }
    chol = llt.matrixL();
  }
  const Eigen::VectorXd mu = cov.mean_or_zero();

  Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  std::vector<int> flags(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd z(p), xi(p);
  for (int i = 0; i < n; ++i) {
    bool outlier = false;
    if (leverage) {
      outlier = rng.uniform() < scheme.outlier_ratio;
      for (int j = 0; j < p; ++j) z(j) = rng.normal();
      if (outlier) {
        xi = scheme.outlier_mean + scheme.outlier_sd * z;
      } else {
        xi = mu + chol * z;
      }
    } else {
      for (int j = 0; j < p; ++j) z(j) = rng.normal();
      xi = mu + (p > 0 ? (chol * z).eval() : z);
      outlier = rng.uniform() < region_eps(scheme, xi);
    }
    x.row(i) = xi.transpose();
    if (outlier) {
      y(i) = scheme.outlier_response;
      flags[static_cast<std::size_t>(i)] = 1;
    } else {
      y(i) = model.sample_response(scheme.clean_theta, xi, rng);
    }
  }
  return {RegressionDataset{std::move(x), std::move(y)}, std::move(flags)};
}

NuDiagnostic nu_diagnostic(const ConditionalModel& model,
                           const Eigen::VectorXd& theta,
                           const ContaminationScheme& scheme,
                           const CovariateSpec& cov, GammaParam gamma,
                           int n_mc, std::uint64_t seed) {
  validate(scheme, cov);
  if (n_mc < 1) throw ConfigError("need at least one Monte Carlo draw");
  const int p = cov.p;
  if (theta.size() != model.param_count(p)) {
    throw ConfigError("parameter length does not match " + model.name() +
                      " with p = " + std::to_string(p));
  }
  const bool leverage = is_leverage(scheme);
  const double total_rate =
      scheme.region ? scheme.region->rate : scheme.outlier_ratio;

  NuDiagnostic diag;
  diag.nu_x = Eigen::VectorXd::Zero(n_mc);
  if (total_rate == 0.0) return diag;  // no contamination mass anywhere
  if (leverage) validate_leverage(scheme, cov);
  if (!model.in_support(scheme.outlier_response)) {
    throw ConfigError("outlier response lies outside the model support");
  }

  Eigen::MatrixXd chol;
  if (p > 0 && !leverage) {
    chol = Eigen::LLT<Eigen::MatrixXd>(cov.covariance()).matrixL();
  }
  const Eigen::VectorXd mu = cov.mean_or_zero();

  Rng rng(seed);
  Eigen::VectorXd z(p), xi(p);
  std::vector<double> powers(static_cast<std::size_t>(n_mc), 0.0);
  for (int i = 0; i < n_mc; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.normal();
    if (leverage) {
      xi = scheme.outlier_mean + scheme.outlier_sd * z;
    } else {
      xi = mu + (p > 0 ? (chol * z).eval() : z);
    }
    const bool active = leverage || region_eps(scheme, xi) > 0.0;
    if (!active) continue;  // ν(x) = 0 by convention where ε(x) = 0
    const double logf = model.log_density(theta, xi, scheme.outlier_response);
    diag.nu_x(i) = std::exp(logf);
    powers[static_cast<std::size_t>(i)] = std::exp(gamma.value * logf);
  }
  const double mean_power =
      pairwise_sum(powers.data(), powers.size()) / static_cast<double>(n_mc);
  diag.nu =
      mean_power > 0.0 ? std::pow(mean_power, 1.0 / gamma.value) : 0.0;
  return diag;
}

}  // namespace gammareg
