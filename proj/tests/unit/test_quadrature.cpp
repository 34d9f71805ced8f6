#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gammareg/quadrature.hpp"

using namespace gammareg;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  // An n-point rule is exact for degree ≤ 2n-1 on [-1,1].
  for (int n : {2, 5, 16, 31}) {
    const auto& r = GaussLegendre::rule(n);
    REQUIRE(r.nodes().size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (std::size_t k = 0; k < r.nodes().size(); ++k) {
        s += r.weights()[k] * std::pow(r.nodes()[k], deg);
      }
      const double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("rule weights are positive and sum to 2") {
  const auto& r = GaussLegendre::rule(40);
  double s = 0.0;
  for (double w : r.weights()) {
    CHECK(w > 0.0);
    s += w;
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("integrate reproduces closed-form Gaussian integrals") {
  const QuadratureSpec spec;
  const auto phi = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  };
  // Total mass over a ±8.5σ window.
  const double mass = integrate(phi, {{-8.5, 8.5}}, spec);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  // Second moment.
  const double m2 =
      integrate([&](double x) { return x * x * phi(x); }, {{-8.5, 8.5}}, spec);
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate handles a union of disjoint intervals") {
  const QuadratureSpec spec;
  const auto f = [](double x) { return x * x; };
  const double got = integrate(f, {{0.0, 1.0}, {2.0, 3.0}}, spec);
  // ∫₀¹x² + ∫₂³x² = 1/3 + 19/3.
  CHECK(got == doctest::Approx(20.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand converges with the default budget") {
  const QuadratureSpec spec;
  const double got =
      integrate([](double x) { return std::sin(3.0 * x); }, {{0.0, 2.0}}, spec);
  const double exact = (1.0 - std::cos(6.0)) / 3.0;
  CHECK(got == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("vector integration matches per-component scalar integration") {
  const QuadratureSpec spec;
  const std::vector<Interval> dom{{-2.0, 1.5}};
  const Eigen::VectorXd v = integrate_vector(
      [](double x, Eigen::VectorXd& out) {
        out(0) = std::exp(-x * x);
        out(1) = x * std::exp(-x * x);
        out(2) = std::cos(x);
      },
      3, dom, spec);
  const double c0 = integrate([](double x) { return std::exp(-x * x); }, dom, spec);
  const double c1 =
      integrate([](double x) { return x * std::exp(-x * x); }, dom, spec);
  const double c2 = integrate([](double x) { return std::cos(x); }, dom, spec);
  // Identical node layout and reduction tree, so equality is bit-level.
  CHECK(v(0) == c0);
  CHECK(v(1) == c1);
  CHECK(v(2) == c2);
}

TEST_CASE("integration is deterministic across calls") {
  const QuadratureSpec spec;
  const auto f = [](double x) { return std::exp(std::sin(x)); };
  const double a = integrate(f, {{-3.0, 7.0}}, spec);
  const double b = integrate(f, {{-3.0, 7.0}}, spec);
  CHECK(a == b);
}

TEST_CASE("panel subdivision engages for wide intervals") {
  // A sharp bump far from the interval center: the default budget (16-node
  // panels of width 4) localizes it to sub-percent accuracy, and raising
  // the node budget drives the error to rounding level.
  const auto bump = [](double x) {
    const double t = (x - 17.0) / 0.2;
    return std::exp(-0.5 * t * t);
  };
  const double exact = 0.2 * std::sqrt(2.0 * std::numbers::pi);
  const double coarse = integrate(bump, {{-40.0, 40.0}}, QuadratureSpec{});
  CHECK(coarse == doctest::Approx(exact).epsilon(1e-2));
  const double fine =
      integrate(bump, {{-40.0, 40.0}}, QuadratureSpec{4000, 2.0});
  CHECK(fine == doctest::Approx(exact).epsilon(1e-12));
}
