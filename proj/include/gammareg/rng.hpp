#pragma once

#include <cstdint>
#include <random>

namespace gammareg {

/// One round of the splitmix64 output function.  Used to derive independent,
/// well-separated seeds for parallel replicates from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for sub-stream `index` of `master`.  Distinct (master, index) pairs
/// give statistically independent mt19937_64 streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Inverse standard-normal CDF (Wichura's AS241 PPND16 rational
/// approximation, ~1e-16 relative accuracy).  Implemented here, instead of
/// relying on std::normal_distribution, so that generated datasets are
/// bit-identical across standard libraries and platforms.
double inverse_normal_cdf(double p);

/// Seedable generator: mt19937_64 core with uniform and (inverse-CDF)
/// normal draws.  One draw consumes exactly one 64-bit word, which keeps
/// stream layouts easy to reason about.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0,1); never returns 0 or 1 exactly.
  double uniform();

  /// Standard normal via inverse-CDF of uniform().
  double normal();

  /// Normal with mean mu and standard deviation sd.
  double normal(double mu, double sd);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gammareg
