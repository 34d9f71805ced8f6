#include "gammareg/divergence.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

namespace {

/// Per-point building blocks: ℓ_i = log f(y_i|x_i;θ) and
/// L_i = log ∫ f(y|x_i;θ)^{1+γ} dy.  -inf ℓ_i (zero density at one point)
/// is tolerated; NaN or +inf is a model/parameter bug and throws.
void per_point_terms(const ConditionalModel& model,
                     const Eigen::VectorXd& theta,
                     const RegressionDataset& data, GammaParam gamma,
                     std::vector<double>& ell, std::vector<double>& big_l) {
  const Eigen::Index n = data.n();
  ell.resize(n);
  big_l.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = data.x.row(i).transpose();
    const double li = model.log_density(theta, xi, data.y(i));
    const double pi = model.log_power_integral(theta, xi, gamma);
    if (std::isnan(li) || li == std::numeric_limits<double>::infinity()) {
      throw NonFiniteDensity("log density is NaN/+inf at row " +
                             std::to_string(i));
    }
    if (!std::isfinite(pi)) {
      throw NonFiniteDensity("log power integral is non-finite at row " +
                             std::to_string(i));
    }
    ell[i] = li;
    big_l[i] = pi;
  }
}

double finite_lse_or_throw(const std::vector<double>& terms,
                           const char* which) {
  const double lse = log_sum_exp(terms);
  if (!std::isfinite(lse)) {
    throw DegenerateObjective(std::string("all ") + which +
                              " terms vanished: the model assigns zero "
                              "density to every observation");
  }
  return lse;
}

/// softmax weights of `terms` (log scale in, probability scale out).
std::vector<double> softmax(const std::vector<double>& terms, double lse) {
  std::vector<double> w(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    w[i] = std::exp(terms[i] - lse);
  }
  return w;
}

/// Deterministic weighted reduction of per-point gradient contributions:
/// rows are filled, then each coordinate is pairwise-summed in index order.
Eigen::VectorXd reduce_rows(const Eigen::MatrixXd& rows) {
  Eigen::VectorXd out(rows.cols());
  std::vector<double> column(rows.rows());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) column[i] = rows(i, j);
    out(j) = pairwise_sum(column.data(), column.size());
  }
  return out;
}

}  // namespace

CrossEntropyValue empirical_cross_entropy_type1(const ConditionalModel& model,
                                                const Eigen::VectorXd& theta,
                                                const RegressionDataset& data,
                                                GammaParam gamma) {
  const double g = gamma.value;
  std::vector<double> ell, big_l;
  per_point_terms(model, theta, data, gamma, ell, big_l);
  // t_i = γ ℓ_i - (γ/(1+γ)) L_i; d̄₁ = -(1/γ)(LSE(t) - log n).
  std::vector<double> t(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) {
    t[i] = g * ell[i] - g / (1.0 + g) * big_l[i];
  }
  const double lse = finite_lse_or_throw(t, "type-1");
  const double value =
      -(lse - std::log(static_cast<double>(data.n()))) / g;
  return {value, EntropyKind::Type1, false};
}

CrossEntropyValue empirical_cross_entropy_type2(const ConditionalModel& model,
                                                const Eigen::VectorXd& theta,
                                                const RegressionDataset& data,
                                                GammaParam gamma) {
  const double g = gamma.value;
  std::vector<double> ell, big_l;
  per_point_terms(model, theta, data, gamma, ell, big_l);
  std::vector<double> gl(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) gl[i] = g * ell[i];
  const double lse_num = finite_lse_or_throw(gl, "type-2");
  const double lse_den = log_sum_exp(big_l);
  const double log_n = std::log(static_cast<double>(data.n()));
  const double value =
      -(lse_num - log_n) / g + (lse_den - log_n) / (1.0 + g);
  return {value, EntropyKind::Type2, false};
}

CrossEntropyValue empirical_cross_entropy(const ConditionalModel& model,
                                          const Eigen::VectorXd& theta,
                                          const RegressionDataset& data,
                                          GammaParam gamma, EntropyKind kind) {
  return kind == EntropyKind::Type1
             ? empirical_cross_entropy_type1(model, theta, data, gamma)
             : empirical_cross_entropy_type2(model, theta, data, gamma);
}

CrossEntropyValue transformed_cross_entropy(const CrossEntropyValue& d,
                                            GammaParam gamma) {
  if (d.transformed) {
    throw ConfigError("cross entropy is already on the transformed scale");
  }
  if (!std::isfinite(d.value)) {
    throw ConfigError("cannot transform a non-finite cross entropy");
  }
  return {-std::exp(-gamma.value * d.value), d.kind, true};
}

ObjectiveEval empirical_objective_with_gradient(const ConditionalModel& model,
                                                const Eigen::VectorXd& theta,
                                                const RegressionDataset& data,
                                                GammaParam gamma,
                                                EntropyKind kind) {
  const double g = gamma.value;
  const Eigen::Index n = data.n();
  const int dim = static_cast<int>(theta.size());
  std::vector<double> ell, big_l;
  per_point_terms(model, theta, data, gamma, ell, big_l);

  // Gradient rows: ∇ℓ_i and ∇L_i per observation.
  Eigen::MatrixXd dl(n, dim), dL(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd xi = data.x.row(i).transpose();
    dl.row(i) = model.log_density_gradient(theta, xi, data.y(i)).transpose();
    dL.row(i) =
        model.log_power_integral_gradient(theta, xi, gamma).transpose();
  }

  ObjectiveEval out;
  Eigen::MatrixXd rows(n, dim);
  if (kind == EntropyKind::Type1) {
    std::vector<double> t(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      t[i] = g * ell[i] - g / (1.0 + g) * big_l[i];
    }
    const double lse = finite_lse_or_throw(t, "type-1");
    out.value = -(lse - std::log(static_cast<double>(n))) / g;
    // ∇d̄₁ = -Σ_i softmax(t)_i (∇ℓ_i - ∇L_i/(1+γ)).
    const std::vector<double> w = softmax(t, lse);
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.row(i) = -w[i] * (dl.row(i) - dL.row(i) / (1.0 + g));
    }
    out.gradient = reduce_rows(rows);
  } else {
    std::vector<double> gl(n);
    for (Eigen::Index i = 0; i < n; ++i) gl[i] = g * ell[i];
    const double lse_num = finite_lse_or_throw(gl, "type-2");
    const double lse_den = log_sum_exp(big_l);
    const double log_n = std::log(static_cast<double>(n));
    out.value = -(lse_num - log_n) / g + (lse_den - log_n) / (1.0 + g);
    // ∇d̄₂ = -Σ softmax(γℓ)_i ∇ℓ_i + (1/(1+γ)) Σ softmax(L)_i ∇L_i.
    const std::vector<double> wn = softmax(gl, lse_num);
    const std::vector<double> wd = softmax(big_l, lse_den);
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.row(i) = -wn[i] * dl.row(i) + wd[i] / (1.0 + g) * dL.row(i);
    }
    out.gradient = reduce_rows(rows);
  }
  return out;
}

}  // namespace gammareg
