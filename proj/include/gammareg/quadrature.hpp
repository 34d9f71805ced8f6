#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace gammareg {

/// A bounded integration interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Controls deterministic Gauss–Legendre integration.  An interval is
/// subdivided into ceil(width / panel_width) equal panels and `nodes` total
/// nodes are spread evenly across them (at least 16 per panel), so the
/// default resolves to 200 nodes for a typical ±8σ covariate window.
struct QuadratureSpec {
  int nodes = 200;           ///< target nodes per integration interval
  double panel_width = 4.0;  ///< maximum panel width before subdivision
};

/// Gauss–Legendre rule on [-1,1] of a given order, built once via
/// Golub–Welsch (eigen-decomposition of the Jacobi matrix) and cached.
class GaussLegendre {
 public:
  static const GaussLegendre& rule(int n);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  explicit GaussLegendre(int n);
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// ∫ f over the union of `domain` intervals.  Deterministic: fixed panel
/// layout, fixed-tree pairwise reduction over node contributions.
double integrate(const std::function<double(double)>& f,
                 const std::vector<Interval>& domain,
                 const QuadratureSpec& spec);

/// Vector-valued variant: integrates f: ℝ → ℝ^dim in a single sweep (one
/// density evaluation can feed both an objective and its gradient).
/// The callback writes f(x) into `out` (pre-sized to dim).
Eigen::VectorXd integrate_vector(
    const std::function<void(double, Eigen::VectorXd&)>& f, int dim,
    const std::vector<Interval>& domain, const QuadratureSpec& spec);

}  // namespace gammareg
