#include <doctest.h>

#include <cmath>
#include <vector>

#include "gammareg/contamination.hpp"
#include "gammareg/errors.hpp"
#include "gammareg/estimator.hpp"
#include "gammareg/models/gaussian_linear.hpp"
#include "gammareg/models/logistic.hpp"
#include "gammareg/models/poisson.hpp"
#include "gammareg/rng.hpp"

using namespace gammareg;

namespace {

RegressionDataset clean_logistic_sample(int n, std::uint64_t seed) {
  LogisticModel m;
  Rng rng(seed);
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  Eigen::VectorXd theta(3);
  theta << 0.3, 1.0, -0.5;
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y(i) = m.sample_response(theta, x.row(i).transpose(), rng);
  }
  return RegressionDataset(x, y);
}

/// Logistic score residual ‖X̃ᵀ(y − π)‖∞ at beta — zero exactly at the MLE.
double logistic_score_norm(const RegressionDataset& data,
                           const Eigen::VectorXd& beta) {
  Eigen::VectorXd score = Eigen::VectorXd::Zero(beta.size());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    Eigen::VectorXd xt(beta.size());
    xt(0) = 1.0;
    xt.tail(data.p()) = data.x.row(i).transpose();
    const double pi = 1.0 / (1.0 + std::exp(-xt.dot(beta)));
    score += (data.y(i) - pi) * xt;
  }
  return score.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("BFGS minimizes a convex quadratic to machine precision") {
  // f(x) = 0.5 xᵀAx − bᵀx with A SPD: unique minimum at A⁻¹b.
  Eigen::MatrixXd a(3, 3);
  a << 4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0;
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 0.5;
  const auto fn = [&](const Eigen::VectorXd& x) {
    ObjectiveEval e;
    e.value = 0.5 * x.dot(a * x) - b.dot(x);
    e.gradient = a * x - b;
    return e;
  };
  const Eigen::VectorXd want = a.ldlt().solve(b);
  const MinimizeResult r = minimize_bfgs(fn, Eigen::VectorXd::Zero(3));
  CHECK(r.converged);
  CHECK((r.x - want).lpNorm<Eigen::Infinity>() < 1e-7);
  // History starts at f(0) = 0 and never increases.
  REQUIRE(!r.history.empty());
  CHECK(r.history.front() == 0.0);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i] <= r.history[i - 1] + 1e-15);
  }
}

TEST_CASE("BFGS treats trial-point failures as +inf and recovers") {
  // Objective defined only for x < 1; the minimum sits at 0.9 inside the
  // domain, and steps probing past the boundary must be absorbed.
  const auto fn = [](const Eigen::VectorXd& x) {
    if (x(0) >= 1.0) throw NonFiniteDensity("outside domain");
    ObjectiveEval e;
    e.value = (x(0) - 0.9) * (x(0) - 0.9);
    e.gradient = Eigen::VectorXd(1);
    e.gradient(0) = 2 * (x(0) - 0.9);
    return e;
  };
  Eigen::VectorXd x0(1);
  x0 << 0.0;
  const MinimizeResult r = minimize_bfgs(fn, x0);
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(0.9).epsilon(1e-6));

  // Starting inside the forbidden region is an error, not a silent NaN.
  Eigen::VectorXd bad(1);
  bad << 2.0;
  CHECK_THROWS_AS((void)minimize_bfgs(fn, bad), Error);
}

TEST_CASE("logistic MLE initialization zeroes the score equations") {
  const RegressionDataset data = clean_logistic_sample(400, 11);
  const Eigen::VectorXd beta = mle_init(logistic_model(), data);
  CHECK(logistic_score_norm(data, beta) < 1e-8);
}

TEST_CASE("gaussian MLE initialization matches least squares") {
  Rng rng(21);
  const int n = 200;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y(i) = 1.0 + 2.0 * x(i, 0) - x(i, 1) + 0.5 * rng.normal();
  }
  const RegressionDataset data(x, y);
  GaussianLinearModel m;
  const Eigen::VectorXd theta = mle_init(m, data);
  REQUIRE(theta.size() == 4);

  // Independent normal-equations solve.
  Eigen::MatrixXd xt(n, 3);
  xt.col(0).setOnes();
  xt.col(1) = x.col(0);
  xt.col(2) = x.col(1);
  const Eigen::VectorXd zeta =
      (xt.transpose() * xt).ldlt().solve(xt.transpose() * y);
  const double rss = (y - xt * zeta).squaredNorm();
  CHECK((theta.head(3) - zeta).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(theta(3) == doctest::Approx(std::sqrt(rss / n)).epsilon(1e-10));
}

TEST_CASE("poisson MLE initialization zeroes the score equations") {
  PoissonModel m;
  Rng rng(31);
  const int n = 300;
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.5;
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    y(i) = m.sample_response(theta, x.row(i).transpose(), rng);
  }
  const RegressionDataset data(x, y);
  const Eigen::VectorXd beta = mle_init(m, data);
  Eigen::VectorXd score = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xt(2);
    xt << 1.0, x(i, 0);
    score += (y(i) - std::exp(xt.dot(beta))) * xt;
  }
  CHECK(score.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("rank-deficient designs are rejected") {
  Eigen::MatrixXd x(10, 2);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = i * 0.1;
    x(i, 1) = 2.0 * x(i, 0);  // exact collinearity
  }
  Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
  const RegressionDataset data(x, y);
  CHECK_THROWS_AS((void)mle_init(logistic_model(), data), SingularDesign);
}

TEST_CASE("separated logistic data still yields a finite initializer") {
  // Perfectly separated labels push the unpenalized MLE to infinity; the
  // ridge-damped retry must return a finite, bounded coefficient vector.
  Eigen::MatrixXd x(20, 1);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = (i < 10) ? -1.0 - 0.1 * i : 1.0 + 0.1 * (i - 10);
    y(i) = (i < 10) ? 0.0 : 1.0;
  }
  const RegressionDataset data(x, y);
  const Eigen::VectorXd beta = mle_init(logistic_model(), data);
  CHECK(beta.allFinite());
  CHECK(beta.lpNorm<Eigen::Infinity>() < 100.0);
}

TEST_CASE("trimmed initialization ignores leverage clusters") {
  // 15% of rows get x ≈ 20 with label 0 — classic leverage contamination.
  RegressionDataset data = clean_logistic_sample(400, 77);
  Rng rng(78);
  Eigen::MatrixXd x = data.x;
  Eigen::VectorXd y = data.y;
  for (int i = 0; i < 60; ++i) {
    x(i, 0) = 20.0 + 0.1 * rng.normal();
    x(i, 1) = 0.1 * rng.normal();
    y(i) = 0.0;
  }
  const RegressionDataset poisoned(x, y);
  Eigen::VectorXd truth(3);
  truth << 0.3, 1.0, -0.5;
  const Eigen::VectorXd plain = mle_init(logistic_model(), poisoned);
  const Eigen::VectorXd trimmed = trimmed_mle_init(logistic_model(), poisoned);
  CHECK((trimmed - truth).norm() < (plain - truth).norm());
  CHECK((trimmed - truth).norm() < 0.5);
  // On clean data the screen keeps essentially everything and the two
  // initializers agree.
  const Eigen::VectorXd a = mle_init(logistic_model(), data);
  const Eigen::VectorXd b = trimmed_mle_init(logistic_model(), data);
  CHECK((a - b).lpNorm<Eigen::Infinity>() < 0.2);
}

TEST_CASE("fit converges on clean logistic data and records its descent") {
  const RegressionDataset data = clean_logistic_sample(500, 101);
  FitConfig fc;
  fc.gamma = GammaParam(0.5);
  fc.kind = EntropyKind::Type1;
  const FitResult r = fit(logistic_model(), data, fc);
  CHECK(r.converged);
  CHECK(r.grad_norm <= 1e-6);
  CHECK(r.iters > 0);
  Eigen::VectorXd truth(3);
  truth << 0.3, 1.0, -0.5;
  CHECK((r.theta_hat - truth).norm() < 0.5);
  REQUIRE(r.objective_history.size() >= 2);
  for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
    CHECK(r.objective_history[i] <= r.objective_history[i - 1] + 1e-15);
  }
  CHECK(r.objective == doctest::Approx(r.objective_history.back()));

  // Objective value is consistent with a fresh evaluation at theta_hat.
  const double check = empirical_cross_entropy_type1(
                           logistic_model(), r.theta_hat, data, fc.gamma)
                           .value;
  CHECK(r.objective == doctest::Approx(check).epsilon(1e-12));
}

TEST_CASE("fits are deterministic functions of data and config") {
  const RegressionDataset data = clean_logistic_sample(300, 202);
  FitConfig fc;
  fc.gamma = GammaParam(1.0);
  fc.kind = EntropyKind::Type2;
  const FitResult a = fit(logistic_model(), data, fc);
  const FitResult b = fit(logistic_model(), data, fc);
  REQUIRE(a.theta_hat.size() == b.theta_hat.size());
  for (Eigen::Index j = 0; j < a.theta_hat.size(); ++j) {
    CHECK(a.theta_hat(j) == b.theta_hat(j));  // bit-identical
  }
  CHECK(a.objective == b.objective);
  CHECK(a.iters == b.iters);
}

TEST_CASE("init strategies: zero, custom, and trimmed starts all work") {
  const RegressionDataset data = clean_logistic_sample(300, 303);
  FitConfig fc;
  fc.gamma = GammaParam(0.5);

  fc.init = InitStrategy::ZeroInit;
  const FitResult rz = fit(logistic_model(), data, fc);
  CHECK(rz.converged);

  fc.init = InitStrategy::Custom;
  fc.custom_init = Eigen::VectorXd::Zero(3);
  const FitResult rc = fit(logistic_model(), data, fc);
  CHECK(rc.converged);
  // Same start, same deterministic path.
  CHECK((rz.theta_hat - rc.theta_hat).lpNorm<Eigen::Infinity>() == 0.0);

  fc.init = InitStrategy::TrimmedMLEInit;
  const FitResult rt = fit(logistic_model(), data, fc);
  CHECK(rt.converged);
  CHECK((rt.theta_hat - rz.theta_hat).lpNorm<Eigen::Infinity>() < 1e-5);

  // Custom without a vector of the right size is a configuration error.
  fc.init = InitStrategy::Custom;
  fc.custom_init = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS((void)fit(logistic_model(), data, fc), ConfigError);
}

TEST_CASE("small-gamma fit collapses to maximum likelihood") {
  // As gamma -> 0 the objective tends to the negative log-likelihood, so
  // the minimizer at gamma = 1e-4 must sit on top of the Newton MLE.
  const RegressionDataset data = clean_logistic_sample(400, 404);
  FitConfig fc;
  fc.gamma = GammaParam(1e-4);
  fc.kind = EntropyKind::Type1;
  const FitResult r = fit(logistic_model(), data, fc);
  const Eigen::VectorXd mle = mle_init(logistic_model(), data);
  CHECK(r.converged);
  CHECK((r.theta_hat - mle).lpNorm<Eigen::Infinity>() < 1e-3);
  // And it nearly solves the likelihood score equations.
  CHECK(logistic_score_norm(data, r.theta_hat) < 0.05);
}

TEST_CASE("fit agrees with an exhaustive grid search on a tiny problem") {
  // One-parameter fixed-sigma Gaussian location model, three points: the
  // grid scan over [-10, 10] in 1e-4 steps is a brute-force oracle.
  GaussianLinearModel m(1.0);
  Eigen::MatrixXd x(3, 0);
  Eigen::VectorXd y(3);
  y << -1.0, 0.5, 4.0;
  const RegressionDataset data(x, y);
  const GammaParam g(0.5);

  double best_theta = 0.0, best_val = 1e300;
  Eigen::VectorXd th(1);
  for (int k = -100000; k <= 100000; ++k) {
    th(0) = k * 1e-4;
    const double v = empirical_cross_entropy_type1(m, th, data, g).value;
    if (v < best_val) {
      best_val = v;
      best_theta = th(0);
    }
  }

  FitConfig fc;
  fc.gamma = g;
  fc.init = InitStrategy::ZeroInit;
  const FitResult r = fit(m, data, fc);
  CHECK(r.converged);
  CHECK(std::abs(r.theta_hat(0) - best_theta) <= 1e-4);
  CHECK(r.objective <= best_val + 1e-12);
}
