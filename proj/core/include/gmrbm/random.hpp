#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace gmrbm {

/// Counter-based generator: output i is a fixed mixing function of (key, i).
/// Streams are derived from (seed, path...) by hashing, so chains and trials
/// can be reproduced independently of scheduling order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc908ULL)) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : Rng(seed) {
    for (std::uint64_t p : path) key_ = mix(key_ ^ mix(p + 0x9e3779b97f4a7c15ULL));
  }

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t index) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(index + 0xbb67ae8584caa73bULL));
    return child;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Fair coin.
  bool bit() { return ((*this)() >> 63) != 0; }

  /// Uniform integer on {0, ..., 2^k - 1}, 1 <= k <= 63.
  std::uint64_t bits(unsigned k) { return (*this)() >> (64 - k); }

  /// Uniform integer on {0, ..., n - 1}, n >= 1 (mask-and-reject).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
    std::uint64_t x = (*this)() & mask;
    while (x >= n) x = (*this)() & mask;
    return x;
  }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gmrbm
