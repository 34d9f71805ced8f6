#include "gammareg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gammareg/errors.hpp"
#include "gammareg/models/gaussian_linear.hpp"
#include "gammareg/models/logistic.hpp"
#include "gammareg/models/poisson.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_minimize_options(const MinimizeOptions& opts) {
  if (opts.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(opts.grad_tol > 0.0) || !(opts.step_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (!(opts.armijo_c1 > 0.0 && opts.armijo_c1 < 1.0) ||
      !(opts.backtrack > 0.0 && opts.backtrack < 1.0) ||
      opts.max_backtracks < 1) {
    throw ConfigError("line-search parameters out of range");
  }
}

/// Intercept-augmented design matrix [1 | x].
Eigen::MatrixXd augmented_design(const RegressionDataset& data) {
  Eigen::MatrixXd a(data.n(), data.p() + 1);
  a.col(0).setOnes();
  if (data.p() > 0) a.rightCols(data.p()) = data.x;
  return a;
}

void require_full_rank(const Eigen::MatrixXd& a) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  // Loose threshold: flags exact/near-exact collinearity, not conditioning.
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols()) {
    throw SingularDesign("intercept-augmented design is rank-deficient");
  }
}

/// Newton maximum likelihood for the canonical GLMs.  `mean_fn` maps the
/// linear predictor to the conditional mean; `weight_fn` gives the local
/// Fisher weight (variance of y under the model).
Eigen::VectorXd newton_glm_mle(const RegressionDataset& data,
                               const std::function<double(double)>& mean_fn,
                               const std::function<double(double)>& weight_fn,
                               const std::function<double(double, double)>&
                                   loglik_fn,
                               double ridge) {
  const Eigen::MatrixXd a = augmented_design(data);
  const Eigen::Index d = a.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  auto penalized_loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = a * b;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      ll += loglik_fn(clamp_eta(eta(i)), data.y(i));
    }
    return ll - 0.5 * ridge * b.squaredNorm();
  };
  double ll = penalized_loglik(beta);
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd eta = a * beta;
    Eigen::VectorXd resid(data.n());
    Eigen::VectorXd w(data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double e = clamp_eta(eta(i));
      resid(i) = data.y(i) - mean_fn(e);
      w(i) = std::max(weight_fn(e), 1e-12);
    }
    const Eigen::VectorXd score =
        a.transpose() * resid - ridge * beta;
    if (score.lpNorm<Eigen::Infinity>() < 1e-10) break;
    Eigen::MatrixXd h = a.transpose() * w.asDiagonal() * a;
    h.diagonal().array() += ridge;
    const Eigen::VectorXd delta = h.ldlt().solve(score);
    // Step-halving keeps the (penalized) likelihood non-decreasing.
    double step = 1.0;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      const Eigen::VectorXd cand = beta + step * delta;
      const double cand_ll = penalized_loglik(cand);
      if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-14) {
        beta = cand;
        ll = cand_ll;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved || (step * delta).lpNorm<Eigen::Infinity>() < 1e-12) break;
  }
  return beta;
}

Eigen::VectorXd glm_mle(const ConditionalModel& model,
                        const RegressionDataset& data) {
  std::function<double(double)> mean_fn, weight_fn;
  std::function<double(double, double)> loglik_fn;
  if (dynamic_cast<const LogisticModel*>(&model) != nullptr) {
    mean_fn = [](double e) { return sigmoid(e); };
    weight_fn = [](double e) {
      const double p = sigmoid(e);
      return p * (1.0 - p);
    };
    loglik_fn = [](double e, double y) {
      return y > 0.5 ? log_sigmoid(e) : log_sigmoid(-e);
    };
  } else if (dynamic_cast<const PoissonModel*>(&model) != nullptr) {
    mean_fn = [](double e) { return std::exp(e); };
    weight_fn = [](double e) { return std::exp(e); };
    loglik_fn = [](double e, double y) {
      return y * e - std::exp(e) - std::lgamma(y + 1.0);
    };
  } else {
    throw ConfigError("no maximum-likelihood routine for model " +
                      model.name());
  }
  Eigen::VectorXd beta = newton_glm_mle(data, mean_fn, weight_fn, loglik_fn,
                                        /*ridge=*/0.0);
  // Runaway coefficients signal (near-)separation: the unpenalized MLE
  // diverges, so refit with a light ridge to get a finite, stable start.
  if (beta.lpNorm<Eigen::Infinity>() > 50.0) {
    beta = newton_glm_mle(data, mean_fn, weight_fn, loglik_fn,
                          /*ridge=*/1e-3);
  }
  return beta;
}

}  // namespace

MinimizeResult minimize_bfgs(const ValueAndGradientFn& fn,
                             const Eigen::VectorXd& x0,
                             const MinimizeOptions& opts) {
  validate_minimize_options(opts);
  const Eigen::Index d = x0.size();
  auto trial_eval = [&](const Eigen::VectorXd& x) -> ObjectiveEval {
    try {
      ObjectiveEval ev = fn(x);
      if (!std::isfinite(ev.value) || !ev.gradient.allFinite()) {
        ev.value = kInf;
      }
      return ev;
    } catch (const Error&) {
      ObjectiveEval bad;
      bad.value = kInf;
      bad.gradient = Eigen::VectorXd::Zero(d);
      return bad;
    }
  };

  ObjectiveEval cur = fn(x0);  // initial-point failures propagate
  if (!std::isfinite(cur.value) || !cur.gradient.allFinite()) {
    throw NoDescent("objective is non-finite at the initial point");
  }
  MinimizeResult res;
  res.x = x0;
  res.history.push_back(cur.value);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  int k = 0;
  for (; k < opts.max_iters; ++k) {
    if (cur.gradient.norm() <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd p = -h * cur.gradient;
    double slope = p.dot(cur.gradient);
    if (!(slope < 0.0)) {
      // Curvature information went bad; restart from steepest descent.
      h = identity;
      p = -cur.gradient;
      slope = p.dot(cur.gradient);
    }
    double alpha = 1.0;
    ObjectiveEval next;
    Eigen::VectorXd xt;
    bool accepted = false;
    for (int b = 0; b < opts.max_backtracks; ++b) {
      xt = res.x + alpha * p;
      next = trial_eval(xt);
      if (next.value <= cur.value + opts.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      if (k == 0) throw NoDescent("line search failed at the initial point");
      break;  // report the best point found, flagged unconverged
    }
    const Eigen::VectorXd s = xt - res.x;
    const Eigen::VectorXd y = next.gradient - cur.gradient;
    res.x = xt;
    cur = next;
    res.history.push_back(cur.value);
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::MatrixXd left = identity - (s * y.transpose()) / sy;
      h = left * h * left.transpose() + (s * s.transpose()) / sy;
    }
    if (s.lpNorm<Eigen::Infinity>() <= opts.step_tol) {
      ++k;
      res.converged = true;
      break;
    }
  }
  res.iters = k;
  res.value = cur.value;
  res.gradient = cur.gradient;
  if (!res.converged && cur.gradient.norm() <= opts.grad_tol) {
    res.converged = true;
  }
  return res;
}

Eigen::VectorXd mle_init(const ConditionalModel& model,
                         const RegressionDataset& data) {
  const Eigen::MatrixXd a = augmented_design(data);
  require_full_rank(a);
  if (const auto* gauss = dynamic_cast<const GaussianLinearModel*>(&model)) {
    const Eigen::VectorXd coef =
        a.colPivHouseholderQr().solve(data.y);
    const Eigen::VectorXd resid = data.y - a * coef;
    if (gauss->sigma_is_fixed()) return coef;
    const double sigma = std::max(
        1e-6, std::sqrt(resid.squaredNorm() / static_cast<double>(data.n())));
    Eigen::VectorXd theta(coef.size() + 1);
    theta << coef, sigma;
    return theta;
  }
  return glm_mle(model, data);
}

Eigen::VectorXd trimmed_mle_init(const ConditionalModel& model,
                                 const RegressionDataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  // Column-wise median/MAD screen on the covariates.
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, p);
  std::vector<double> buf(static_cast<std::size_t>(n));
  auto median_of = [&](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = data.x(i, j);
    const double med = median_of(buf);
    for (Eigen::Index i = 0; i < n; ++i) {
      buf[static_cast<std::size_t>(i)] = std::abs(data.x(i, j) - med);
    }
    const double mad = median_of(buf) * 1.4826;  // consistent normal scale
    if (mad > 0.0) {
      for (Eigen::Index i = 0; i < n; ++i) {
        z(i, j) = std::abs(data.x(i, j) - med) / mad;
      }
    }
  }
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p == 0 || z.row(i).maxCoeff() <= 5.0) keep.push_back(i);
  }
  if (static_cast<Eigen::Index>(keep.size()) < 2 * (p + 1) ||
      static_cast<Eigen::Index>(keep.size()) == n) {
    return mle_init(model, data);
  }
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(keep.size()), p);
  Eigen::VectorXd ys(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    xs.row(static_cast<Eigen::Index>(r)) = data.x.row(keep[r]);
    ys(static_cast<Eigen::Index>(r)) = data.y(keep[r]);
  }
  try {
    return mle_init(model, RegressionDataset{std::move(xs), std::move(ys)});
  } catch (const SingularDesign&) {
    return mle_init(model, data);
  }
}

FitResult fit(const ConditionalModel& model, const RegressionDataset& data,
              const FitConfig& config) {
  if (config.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(config.grad_tol > 0.0) || !(config.step_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  const int dim = model.param_count(static_cast<int>(data.p()));
  Eigen::VectorXd theta0;
  switch (config.init) {
    case InitStrategy::MLEInit:
      theta0 = mle_init(model, data);
      break;
    case InitStrategy::TrimmedMLEInit:
      theta0 = trimmed_mle_init(model, data);
      break;
    case InitStrategy::ZeroInit:
      theta0 = model.from_unconstrained(Eigen::VectorXd::Zero(dim));
      break;
    case InitStrategy::Custom:
      if (config.custom_init.size() != dim) {
        throw ConfigError("custom initial vector has length " +
                          std::to_string(config.custom_init.size()) +
                          ", expected " + std::to_string(dim));
      }
      theta0 = config.custom_init;
      break;
  }

  auto objective = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd theta = model.from_unconstrained(u);
    ObjectiveEval ev = empirical_objective_with_gradient(
        model, theta, data, config.gamma, config.kind);
    ev.gradient = model.gradient_to_unconstrained(theta, ev.gradient);
    return ev;
  };

  MinimizeOptions opts;
  opts.max_iters = config.max_iters;
  opts.grad_tol = config.grad_tol;
  opts.step_tol = config.step_tol;
  const MinimizeResult r =
      minimize_bfgs(objective, model.to_unconstrained(theta0), opts);

  FitResult out;
  out.theta_hat = model.from_unconstrained(r.x);
  out.objective = r.value;
  out.converged = r.converged;
  out.iters = r.iters;
  out.grad_norm = r.gradient.norm();
  out.objective_history = r.history;
  return out;
}

}  // namespace gammareg
