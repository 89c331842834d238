#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace spdmix {

/// Seeded 64-bit Mersenne Twister with the handful of draws the library
/// needs. Streams derived from (seed, index) are independent of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for output `index` of a job seeded with `seed`.
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// True with probability p; p = 0 never fires and p = 1 always does.
  bool bernoulli(double p);
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spdmix
