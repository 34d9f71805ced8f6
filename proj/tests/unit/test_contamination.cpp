#include <doctest.h>

#include <cmath>
#include <vector>

#include "gammareg/contamination.hpp"
#include "gammareg/errors.hpp"
#include "gammareg/models/logistic.hpp"

using namespace gammareg;

namespace {

ContaminationScheme benchmark_scheme(double eps) {
  ContaminationScheme s;
  s.clean_theta = Eigen::VectorXd(6);
  s.clean_theta << 0.0, 1.0, -1.0, 1.0, -1.0, 0.0;
  s.mode = ContaminationMode::Heterogeneous;
  s.outlier_ratio = eps;
  s.outlier_mean = Eigen::VectorXd(5);
  s.outlier_mean << 20.0, 0.0, 20.0, 0.0, 0.0;
  s.outlier_sd = 0.5;
  s.outlier_response = 0.0;
  return s;
}

}  // namespace

TEST_CASE("covariate spec produces the AR(1) covariance") {
  CovariateSpec cov;
  cov.p = 4;
  cov.rho = 0.2;
  const Eigen::MatrixXd sigma = cov.covariance();
  REQUIRE(sigma.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(sigma(i, j) ==
            doctest::Approx(std::pow(0.2, std::abs(i - j))).epsilon(1e-14));
    }
  }
  CHECK(cov.mean_or_zero().isZero());
  cov.mean = Eigen::VectorXd::Ones(4);
  CHECK((cov.mean_or_zero().array() == 1.0).all());
}

TEST_CASE("generation is bit-reproducible and seed-sensitive") {
  const ContaminationScheme s = benchmark_scheme(0.2);
  CovariateSpec cov;
  const GeneratedData a = generate(logistic_model(), s, cov, 500, 42);
  const GeneratedData b = generate(logistic_model(), s, cov, 500, 42);
  const GeneratedData c = generate(logistic_model(), s, cov, 500, 43);
  CHECK((a.dataset.x.array() == b.dataset.x.array()).all());
  CHECK((a.dataset.y.array() == b.dataset.y.array()).all());
  CHECK(a.is_outlier == b.is_outlier);
  CHECK_FALSE((a.dataset.x.array() == c.dataset.x.array()).all());
}

TEST_CASE("leverage flavor: flags, responses, and covariate laws") {
  const double eps = 0.3;
  const int n = 20000;
  const GeneratedData d =
      generate(logistic_model(), benchmark_scheme(eps), CovariateSpec{}, n, 7);
  REQUIRE(d.is_outlier.size() == static_cast<std::size_t>(n));

  int flagged = 0;
  double clean_mean0 = 0.0, out_mean0 = 0.0, out_mean1 = 0.0;
  for (int i = 0; i < n; ++i) {
    if (d.is_outlier[i]) {
      ++flagged;
      CHECK(d.dataset.y(i) == 0.0);  // dirac at the outlier response
      out_mean0 += d.dataset.x(i, 0);
      out_mean1 += d.dataset.x(i, 1);
      // Outlier covariates concentrate near mu_out: 0.5-sd components.
      CHECK(std::abs(d.dataset.x(i, 0) - 20.0) < 3.0);
      CHECK(std::abs(d.dataset.x(i, 2) - 20.0) < 3.0);
    } else {
      clean_mean0 += d.dataset.x(i, 0);
      CHECK((d.dataset.y(i) == 0.0 || d.dataset.y(i) == 1.0));
    }
  }
  // Bernoulli mixing: flagged fraction within 5 binomial SE of eps.
  const double se = std::sqrt(eps * (1 - eps) / n);
  CHECK(std::abs(double(flagged) / n - eps) < 5 * se);
  // Means: clean coords near 0, outlier coords near the planted center.
  CHECK(std::abs(clean_mean0 / (n - flagged)) < 0.05);
  CHECK(std::abs(out_mean0 / flagged - 20.0) < 0.05);
  CHECK(std::abs(out_mean1 / flagged) < 0.05);
}

TEST_CASE("clean rows follow the covariate correlation structure") {
  CovariateSpec cov;
  cov.p = 5;
  cov.rho = 0.2;
  const GeneratedData d =
      generate(logistic_model(), benchmark_scheme(0.0), cov, 40000, 99);
  // Adjacent-column correlation ≈ 0.2, lag-2 ≈ 0.04.
  const auto corr = [&](int a, int b) {
    const auto ca = d.dataset.x.col(a).array() - d.dataset.x.col(a).mean();
    const auto cb = d.dataset.x.col(b).array() - d.dataset.x.col(b).mean();
    return (ca * cb).mean() /
           std::sqrt(ca.square().mean() * cb.square().mean());
  };
  CHECK(std::abs(corr(0, 1) - 0.2) < 0.02);
  CHECK(std::abs(corr(1, 2) - 0.2) < 0.02);
  CHECK(std::abs(corr(0, 2) - 0.04) < 0.02);
  CHECK(std::abs(corr(0, 4)) < 0.02);
  CHECK(std::abs(d.dataset.x.col(0).array().square().mean() - 1.0) < 0.03);
}

TEST_CASE("region flavor contaminates only past the boundary") {
  ContaminationScheme s;
  s.clean_theta = Eigen::VectorXd(2);
  s.clean_theta << 0.0, 1.0;
  s.mode = ContaminationMode::Heterogeneous;
  s.region = RegionRate{0, 1.0, 0.5};
  s.outlier_response = 0.0;
  CovariateSpec cov;
  cov.p = 1;
  const GeneratedData d = generate(logistic_model(), s, cov, 20000, 5);
  int beyond = 0, flagged_beyond = 0;
  for (int i = 0; i < 20000; ++i) {
    if (d.dataset.x(i, 0) <= 1.0) {
      CHECK(d.is_outlier[i] == 0);  // no contamination below the cut
    } else {
      ++beyond;
      flagged_beyond += d.is_outlier[i];
      if (d.is_outlier[i]) CHECK(d.dataset.y(i) == 0.0);
    }
  }
  REQUIRE(beyond > 1000);
  const double frac = double(flagged_beyond) / beyond;
  CHECK(std::abs(frac - 0.5) < 5 * std::sqrt(0.25 / beyond));
}

TEST_CASE("homogeneous flavor flags independently of x") {
  ContaminationScheme s;
  s.clean_theta = Eigen::VectorXd(2);
  s.clean_theta << 0.0, 1.0;
  s.mode = ContaminationMode::Homogeneous;
  s.outlier_ratio = 0.25;
  s.outlier_response = 1.0;
  CovariateSpec cov;
  cov.p = 1;
  const GeneratedData d = generate(logistic_model(), s, cov, 20000, 6);
  // Flag rate among x < 0 and x > 0 must match (no covariate dependence).
  int nlo = 0, flo = 0, nhi = 0, fhi = 0;
  for (int i = 0; i < 20000; ++i) {
    if (d.dataset.x(i, 0) < 0) {
      ++nlo;
      flo += d.is_outlier[i];
    } else {
      ++nhi;
      fhi += d.is_outlier[i];
    }
  }
  const double plo = double(flo) / nlo, phi = double(fhi) / nhi;
  CHECK(std::abs(plo - 0.25) < 5 * std::sqrt(0.25 * 0.75 / nlo));
  CHECK(std::abs(phi - 0.25) < 5 * std::sqrt(0.25 * 0.75 / nhi));
}

TEST_CASE("invalid schemes are rejected") {
  ContaminationScheme s = benchmark_scheme(0.2);
  CovariateSpec cov;
  s.outlier_response = 0.5;  // outside {0,1}
  CHECK_THROWS_AS((void)generate(logistic_model(), s, cov, 100, 1),
                  ConfigError);
  s = benchmark_scheme(1.5);  // ratio outside [0,1)
  CHECK_THROWS_AS((void)generate(logistic_model(), s, cov, 100, 1),
                  ConfigError);
  s = benchmark_scheme(0.2);
  s.clean_theta = Eigen::VectorXd::Zero(3);  // wrong length for p=5
  CHECK_THROWS_AS((void)generate(logistic_model(), s, cov, 100, 1),
                  ConfigError);
  s = benchmark_scheme(0.2);
  CHECK_THROWS_AS((void)generate(logistic_model(), s, cov, 0, 1), ConfigError);
}

TEST_CASE("nu diagnostic separates benign from adversarial placements") {
  CovariateSpec cov;
  const GammaParam g(0.5);
  // Benchmark leverage outliers: eta ≈ 40 at mu_out, so the dirac at y = 0
  // sits e^{-40} deep in the model's tail — nu is essentially zero.
  {
    const ContaminationScheme s = benchmark_scheme(0.3);
    const NuDiagnostic nd =
        nu_diagnostic(logistic_model(), s.clean_theta, s, cov, g, 4000, 11);
    REQUIRE(nd.nu_x.size() == 4000);
    CHECK(nd.nu < 1e-10);
    CHECK(nd.nu_x.maxCoeff() < 1e-10);
  }
  // Same geometry but the dirac on the majority label: overlap is total.
  {
    ContaminationScheme s = benchmark_scheme(0.3);
    s.outlier_response = 1.0;
    const NuDiagnostic nd =
        nu_diagnostic(logistic_model(), s.clean_theta, s, cov, g, 4000, 11);
    CHECK(nd.nu > 0.1);
  }
  // No contamination mass: nu = 0 by convention.
  {
    const ContaminationScheme s = benchmark_scheme(0.0);
    const NuDiagnostic nd =
        nu_diagnostic(logistic_model(), s.clean_theta, s, cov, g, 1000, 11);
    CHECK(nd.nu == 0.0);
    CHECK(nd.nu_x.isZero());
  }
}

TEST_CASE("nu diagnostic is deterministic in its seed") {
  const ContaminationScheme s = benchmark_scheme(0.3);
  CovariateSpec cov;
  const NuDiagnostic a =
      nu_diagnostic(logistic_model(), s.clean_theta, s, cov, GammaParam(1.0),
                    2000, 21);
  const NuDiagnostic b =
      nu_diagnostic(logistic_model(), s.clean_theta, s, cov, GammaParam(1.0),
                    2000, 21);
  CHECK(a.nu == b.nu);
  CHECK((a.nu_x.array() == b.nu_x.array()).all());
}
