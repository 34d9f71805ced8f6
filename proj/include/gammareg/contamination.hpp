#pragma once

// Contaminated regression data generation,
//   g(y|x) = (1 − ε(x)) f(y|x;θ*) + ε(x) δ_{y†},
// in three concrete flavors (leverage, covariate-region, homogeneous),
// plus the Monte Carlo tail-overlap diagnostic ν.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "gammareg/model.hpp"
#include "gammareg/types.hpp"

namespace gammareg {

/// Clean covariate law: x ~ N(mean, Σ) with the AR(1) structure
/// Σ_ij = rho^{|i−j|}.  An empty mean vector stands for zeros.
struct CovariateSpec {
  int p = 5;
  double rho = 0.2;
  Eigen::VectorXd mean;

  Eigen::MatrixXd covariance() const;
  Eigen::VectorXd mean_or_zero() const;
};

enum class ContaminationMode { Heterogeneous, Homogeneous };

/// Explicit covariate-dependent rate ε(x) = rate·1{x[coord] > cut}
/// (coord indexes the raw covariates, 0-based).
struct RegionRate {
  int coord = 0;
  double cut = 0.0;
  double rate = 0.0;
};

/// How contaminated rows are produced:
///  - Heterogeneous without `region`: leverage outliers — the row draws
///    x ~ N(outlier_mean, outlier_sd²·I) and y = outlier_response, with
///    row-wise Bernoulli(outlier_ratio) mixing.  ε(x) arises implicitly
///    from where the outlier covariate law puts its mass.
///  - Heterogeneous with `region`: x stays clean, the flag is
///    Bernoulli(ε(x)), and flagged rows get y = outlier_response.
///  - Homogeneous: x stays clean, flags are Bernoulli(outlier_ratio).
/// The outlier response is a point mass (dirac) at `outlier_response`.
struct ContaminationScheme {
  Eigen::VectorXd clean_theta;  // θ* of the clean conditional model
  ContaminationMode mode = ContaminationMode::Heterogeneous;
  double outlier_ratio = 0.0;  // constant ε for leverage/homogeneous mixing
  std::optional<RegionRate> region;
  Eigen::VectorXd outlier_mean;  // μ_out for leverage draws
  double outlier_sd = 0.5;
  double outlier_response = 0.0;  // y†
};

struct GeneratedData {
  RegressionDataset dataset;
  std::vector<int> is_outlier;  // 1 per contaminated row, aligned with rows
};

/// Tail-overlap diagnostic.  nu_x holds per-point values ν(x_i) =
/// f(y†|x_i;θ), zeroed where ε(x_i) = 0; nu is the aggregate
/// (mean_i ν(x_i)^γ)^{1/γ} over the sampled covariates, and 0 by
/// convention when the scheme carries no contamination mass.
struct NuDiagnostic {
  Eigen::VectorXd nu_x;
  double nu = 0.0;
};

/// Draws n rows.  Per row, depending on the scheme flavor (see above), the
/// generator consumes the stream in a fixed documented order so datasets
/// are reproducible for a fixed seed:
///  - leverage: mixing uniform, then p covariate normals, then the clean
///    response draw (skipped for outlier rows);
///  - region/homogeneous: p covariate normals, then the mixing uniform,
///    then the clean response draw (skipped for outlier rows).
GeneratedData generate(const ConditionalModel& model,
                       const ContaminationScheme& scheme,
                       const CovariateSpec& cov, int n, std::uint64_t seed);

/// Monte Carlo ν at n_mc covariates sampled from the contamination-relevant
/// law: the outlier covariate distribution for leverage schemes, the clean
/// covariate law otherwise.
NuDiagnostic nu_diagnostic(const ConditionalModel& model,
                           const Eigen::VectorXd& theta,
                           const ContaminationScheme& scheme,
                           const CovariateSpec& cov, GammaParam gamma,
                           int n_mc, std::uint64_t seed);

}  // namespace gammareg
