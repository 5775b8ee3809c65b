#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bppr {

// Thin wrapper over a 64-bit Mersenne twister exposing the draws the sampler
// needs. Not thread-safe; each chain owns one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }
  // Inverse-gamma with the shape/rate parameterization: rate / Gamma(shape, 1).
  double inv_gamma(double shape, double rate) { return rate / gamma(shape); }

  // Index drawn with probability proportional to `weights` (nonnegative, not all zero).
  std::size_t categorical(std::span<const double> weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer; derives independent seeds from (master, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace bppr
