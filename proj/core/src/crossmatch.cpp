#include "gmrbm/crossmatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmrbm/error.hpp"

namespace gmrbm {

MatchingMethod resolve(MatchingChoice choice, std::size_t pooled_size) noexcept {
  switch (choice) {
    case MatchingChoice::optimal: return MatchingMethod::optimal;
    case MatchingChoice::greedy: return MatchingMethod::greedy;
    case MatchingChoice::automatic: break;
  }
  return pooled_size <= kOptimalMatchingLimit ? MatchingMethod::optimal : MatchingMethod::greedy;
}

const char* to_string(MatchingChoice choice) noexcept {
  switch (choice) {
    case MatchingChoice::optimal: return "optimal";
    case MatchingChoice::greedy: return "greedy";
    case MatchingChoice::automatic: return "auto";
  }
  return "?";
}

DistanceMatrix pairwise_distances(const BitMatrix& x, const BitMatrix& y) {
  require(x.cols() == y.cols(), ErrorCode::dimension_mismatch, "sample batches have different dimensions");
  require(x.rows() == y.rows(), ErrorCode::dimension_mismatch,
          "sample batches must have equal sizes (unequal sizes are not supported)");
  require(x.rows() >= 1, ErrorCode::invalid_argument, "sample batches are empty");
  const std::size_t n = x.rows();
  DistanceMatrix d(2 * n);
  auto row = [&](std::size_t k) { return k < n ? x.row(k) : y.row(k - n); };
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = i + 1; j < 2 * n; ++j) d.set(i, j, hamming(row(i), row(j)));
  return d;
}

std::size_t cross_count(const Matching& m, std::size_t n) {
  validate_matching(m, 2 * n);
  std::size_t a = 0;
  for (auto [i, j] : m.pairs)
    if ((i < n) != (j < n)) ++a;
  return a;
}

double log_null_pmf(std::size_t a, std::size_t n) {
  if (a > n || (n - a) % 2 != 0) return -std::numeric_limits<double>::infinity();
  const auto nd = static_cast<double>(n);
  const auto ad = static_cast<double>(a);
  const double half = (nd - ad) / 2.0;
  const double log_central = std::lgamma(2.0 * nd + 1.0) - 2.0 * std::lgamma(nd + 1.0);
  return ad * std::log(2.0) + std::lgamma(nd + 1.0) - log_central - 2.0 * std::lgamma(half + 1.0) -
         std::lgamma(ad + 1.0);
}

std::vector<double> null_pmf(std::size_t n) {
  require(n >= 1, ErrorCode::invalid_argument, "null_pmf needs n >= 1");
  std::vector<double> f(n + 1, 0.0);
  for (std::size_t a = n % 2; a <= n; a += 2) f[a] = std::exp(log_null_pmf(a, n));
  return f;
}

double p_value(std::size_t a_obs, std::size_t n) {
  require(n >= 1, ErrorCode::invalid_argument, "p_value needs n >= 1");
  require(a_obs <= n, ErrorCode::invalid_argument, "a_obs out of range [0, n]");
  if (a_obs == n) return 1.0;
  double acc = 0.0;
  for (std::size_t a = n % 2; a <= a_obs; a += 2) acc += std::exp(log_null_pmf(a, n));
  return std::min(acc, 1.0);
}

CrossmatchOutcome crossmatch_test(const BitMatrix& x, const BitMatrix& y, MatchingChoice choice,
                                  std::uint64_t tie_seed) {
  const DistanceMatrix d = pairwise_distances(x, y);
  const MatchingMethod method = resolve(choice, d.size());
  const Matching m = method == MatchingMethod::optimal ? optimal_matching(d, tie_seed) : greedy_matching(d, tie_seed);
  CrossmatchOutcome out;
  out.n = x.rows();
  out.a_obs = cross_count(m, out.n);
  out.p_value = p_value(out.a_obs, out.n);
  out.method = method;
  out.matching_cost = m.total_cost;
  out.null_exact = method == MatchingMethod::optimal;
  return out;
}

}  // namespace gmrbm
