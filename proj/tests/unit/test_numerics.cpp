#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gammareg/numerics.hpp"

using namespace gammareg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("pairwise_sum matches long-double accumulation") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u, 7u, 100u, 1000u, 4097u}) {
    std::vector<double> x(n);
    long double ref = 0.0L;
    for (auto& v : x) {
      v = u(gen);
      ref += static_cast<long double>(v);
    }
    const double got = pairwise_sum(x);
    CHECK(got == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  }
  CHECK(pairwise_sum(nullptr, 0) == 0.0);
}

TEST_CASE("pairwise_sum beats naive accumulation on an adversarial input") {
  // 1 followed by many tiny terms: naive left-to-right summation loses the
  // tiny terms' contribution harder than the balanced tree does.
  const std::size_t n = 1 << 20;
  std::vector<double> x(n, 1e-16);
  x[0] = 1.0;
  const double exact = 1.0 + (n - 1) * 1e-16;
  const double tree = pairwise_sum(x);
  CHECK(std::abs(tree - exact) < 1e-12);
}

TEST_CASE("pairwise_sum is a pure function of the value sequence") {
  std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  const double a = pairwise_sum(x);
  const double b = pairwise_sum(x.data(), x.size());
  CHECK(a == b);  // bit-identical
}

TEST_CASE("log_sum_exp handles wide dynamic range via max shift") {
  // exp(1000) overflows double, but LSE must not.
  std::vector<double> x{1000.0, 1000.0};
  CHECK(log_sum_exp(x) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));

  std::vector<double> y{-1000.0, -1000.0, -1000.0, -1000.0};
  CHECK(log_sum_exp(y) ==
        doctest::Approx(-1000.0 + std::log(4.0)).epsilon(1e-15));

  // Mixed magnitudes: the small term is a relative e^{-200} correction.
  std::vector<double> z{0.0, -200.0};
  CHECK(log_sum_exp(z) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("log_sum_exp edge cases") {
  CHECK(log_sum_exp(nullptr, 0) == -kInf);
  std::vector<double> all_ninf{-kInf, -kInf};
  CHECK(log_sum_exp(all_ninf) == -kInf);
  std::vector<double> one{3.5};
  CHECK(log_sum_exp(one) == 3.5);
  std::vector<double> with_ninf{-kInf, 2.0};
  CHECK(log_sum_exp(with_ninf) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("log_sum_exp2 agrees with the vector form") {
  for (double a : {-700.0, -3.0, 0.0, 2.5, 700.0}) {
    for (double b : {-710.0, -1.0, 0.0, 5.0}) {
      std::vector<double> v{a, b};
      CHECK(log_sum_exp2(a, b) == doctest::Approx(log_sum_exp(v)).epsilon(1e-15));
    }
  }
}

TEST_CASE("clamp_eta saturates at ±700") {
  CHECK(clamp_eta(0.0) == 0.0);
  CHECK(clamp_eta(699.0) == 699.0);
  CHECK(clamp_eta(1e6) == 700.0);
  CHECK(clamp_eta(-1e6) == -700.0);
  CHECK(clamp_eta(kEtaClamp) == kEtaClamp);
}

TEST_CASE("log_sigmoid is stable across the whole range") {
  // Moderate range: agrees with the textbook formula.
  for (double eta : {-30.0, -5.0, -0.1, 0.0, 0.1, 5.0, 30.0}) {
    CHECK(log_sigmoid(eta) ==
          doctest::Approx(-std::log1p(std::exp(-eta))).epsilon(1e-15));
  }
  // Deep negative: log σ(η) → η (after clamping), no -inf.
  CHECK(log_sigmoid(-650.0) == doctest::Approx(-650.0).epsilon(1e-12));
  CHECK(std::isfinite(log_sigmoid(-1e8)));
  CHECK(log_sigmoid(-1e8) == doctest::Approx(-700.0).epsilon(1e-12));
  // Deep positive: log σ(η) → 0 from below.
  CHECK(log_sigmoid(1e8) <= 0.0);
  CHECK(log_sigmoid(1e8) == doctest::Approx(0.0));
  // Symmetry identity log σ(η) - log σ(-η) = η.
  for (double eta : {-8.0, -1.0, 0.5, 3.0}) {
    CHECK(log_sigmoid(eta) - log_sigmoid(-eta) ==
          doctest::Approx(eta).epsilon(1e-14));
  }
}

TEST_CASE("sigmoid matches exp(log_sigmoid) and is symmetric") {
  for (double eta : {-40.0, -2.0, 0.0, 2.0, 40.0}) {
    CHECK(sigmoid(eta) ==
          doctest::Approx(std::exp(log_sigmoid(eta))).epsilon(1e-14));
    CHECK(sigmoid(eta) + sigmoid(-eta) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-1e9) >= 0.0);
  CHECK(sigmoid(1e9) <= 1.0);
}
