#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gmrbm/matching.hpp"
#include "gmrbm/rbm.hpp"

namespace gmrbm {

/// How the pooled samples are paired. `automatic` picks optimal up to
/// kOptimalMatchingLimit points and greedy above.
enum class MatchingChoice { optimal, greedy, automatic };

inline constexpr std::size_t kOptimalMatchingLimit = 400;

MatchingMethod resolve(MatchingChoice choice, std::size_t pooled_size) noexcept;
const char* to_string(MatchingChoice choice) noexcept;

struct CrossmatchOutcome {
  std::size_t n = 0;        // samples per group
  std::size_t a_obs = 0;    // cross pairs in the matching
  double p_value = 1.0;     // P(A <= a_obs) under the null
  MatchingMethod method = MatchingMethod::optimal;
  std::uint64_t matching_cost = 0;
  /// The closed-form null is exact only for the optimal matching.
  bool null_exact = true;
};

/// Hamming distances over the pooled rows: indices [0, n) are X, [n, 2n) are Y.
DistanceMatrix pairwise_distances(const BitMatrix& x, const BitMatrix& y);
inline DistanceMatrix pairwise_distances(const SampleBatch& x, const SampleBatch& y) {
  return pairwise_distances(x.samples, y.samples);
}

/// Pairs with one index below n and the other at or above n.
std::size_t cross_count(const Matching& m, std::size_t n);

/// f(a) for a = 0..n: exact null distribution of the cross count when the
/// 2n pooled points are matched uniformly at random.
std::vector<double> null_pmf(std::size_t n);

/// log f(a); -infinity where f(a) = 0.
double log_null_pmf(std::size_t a, std::size_t n);

/// F(a_obs) = sum_{a <= a_obs} f(a). Small values reject.
double p_value(std::size_t a_obs, std::size_t n);

CrossmatchOutcome crossmatch_test(const BitMatrix& x, const BitMatrix& y, MatchingChoice choice,
                                  std::uint64_t tie_seed);
inline CrossmatchOutcome crossmatch_test(const SampleBatch& x, const SampleBatch& y, MatchingChoice choice,
                                         std::uint64_t tie_seed) {
  return crossmatch_test(x.samples, y.samples, choice, tie_seed);
}

}  // namespace gmrbm
