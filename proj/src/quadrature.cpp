#include "gammareg/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "gammareg/errors.hpp"
#include "gammareg/numerics.hpp"

namespace gammareg {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
  // Golub–Welsch: the nodes are the eigenvalues of the symmetric
  // tridiagonal Jacobi matrix with off-diagonals b_k = k/sqrt(4k^2-1); the
  // weight of node j is 2 * (first eigenvector component)^2.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw QuadratureFailure("Jacobi matrix eigen-decomposition failed");
  }
  nodes_.resize(n);
  weights_.resize(n);
  for (int j = 0; j < n; ++j) {
    nodes_[j] = solver.eigenvalues()(j);
    const double v0 = solver.eigenvectors()(0, j);
    weights_[j] = 2.0 * v0 * v0;
  }
}

const GaussLegendre& GaussLegendre::rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<GaussLegendre>(new GaussLegendre(n)))
             .first;
  }
  return *it->second;
}

namespace {

struct Panel {
  double lo, hi;
  int order;
};

std::vector<Panel> layout(const std::vector<Interval>& domain,
                          const QuadratureSpec& spec) {
  std::vector<Panel> panels;
  for (const Interval& iv : domain) {
    if (!(iv.hi > iv.lo)) continue;  // empty or inverted: contributes nothing
    const double width = iv.hi - iv.lo;
    const int count =
        std::max(1, static_cast<int>(std::ceil(width / spec.panel_width)));
    const int order = std::max(16, spec.nodes / count);
    for (int k = 0; k < count; ++k) {
      panels.push_back({iv.lo + width * k / count,
                        iv.lo + width * (k + 1) / count, order});
    }
  }
  return panels;
}

}  // namespace

double integrate(const std::function<double(double)>& f,
                 const std::vector<Interval>& domain,
                 const QuadratureSpec& spec) {
  const std::vector<Panel> panels = layout(domain, spec);
  std::vector<double> panel_sums;
  panel_sums.reserve(panels.size());
  std::vector<double> terms;
  for (const Panel& panel : panels) {
    const GaussLegendre& gl = GaussLegendre::rule(panel.order);
    const double mid = 0.5 * (panel.lo + panel.hi);
    const double half = 0.5 * (panel.hi - panel.lo);
    terms.resize(gl.nodes().size());
    for (std::size_t j = 0; j < gl.nodes().size(); ++j) {
      terms[j] = gl.weights()[j] * f(mid + half * gl.nodes()[j]);
    }
    panel_sums.push_back(half * pairwise_sum(terms));
  }
  return pairwise_sum(panel_sums);
}

Eigen::VectorXd integrate_vector(
    const std::function<void(double, Eigen::VectorXd&)>& f, int dim,
    const std::vector<Interval>& domain, const QuadratureSpec& spec) {
  const std::vector<Panel> panels = layout(domain, spec);
  // Contributions are collected per coordinate and reduced pairwise so the
  // result is independent of evaluation order.
  Eigen::VectorXd out(dim);
  Eigen::VectorXd value(dim);
  std::vector<std::vector<double>> panel_sums(dim);
  std::vector<std::vector<double>> terms(dim);
  for (const Panel& panel : panels) {
    const GaussLegendre& gl = GaussLegendre::rule(panel.order);
    const double mid = 0.5 * (panel.lo + panel.hi);
    const double half = 0.5 * (panel.hi - panel.lo);
    for (int d = 0; d < dim; ++d) terms[d].resize(gl.nodes().size());
    for (std::size_t j = 0; j < gl.nodes().size(); ++j) {
      f(mid + half * gl.nodes()[j], value);
      for (int d = 0; d < dim; ++d) {
        terms[d][j] = gl.weights()[j] * value(d);
      }
    }
    for (int d = 0; d < dim; ++d) {
      panel_sums[d].push_back(half * pairwise_sum(terms[d]));
    }
  }
  for (int d = 0; d < dim; ++d) out(d) = pairwise_sum(panel_sums[d]);
  return out;
}

}  // namespace gammareg
