#include "gmrbm/matching.hpp"

#include <algorithm>
#include <numeric>

#include "gmrbm/error.hpp"
#include "gmrbm/random.hpp"

namespace gmrbm {

namespace {

constexpr unsigned kJitterBits = 20;

void check_even(const DistanceMatrix& d) {
  require(d.size() % 2 == 0, ErrorCode::invalid_argument, "matching needs an even number of points");
}

// Tie-break key per unordered pair (i < j), stored at i * size + j.
std::vector<std::uint32_t> pair_jitter(std::size_t size, std::uint64_t tie_seed) {
  std::vector<std::uint32_t> jitter(size * size, 0);
  Rng rng(tie_seed, {0x74696573ULL});
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) jitter[i * size + j] = static_cast<std::uint32_t>(rng.bits(kJitterBits));
  return jitter;
}

Matching finish(std::vector<std::pair<std::size_t, std::size_t>> pairs, const DistanceMatrix& d,
                MatchingMethod method) {
  std::sort(pairs.begin(), pairs.end());
  Matching m{std::move(pairs), 0, method};
  for (auto [i, j] : m.pairs) m.total_cost += d(i, j);
  return m;
}

}  // namespace

void DistanceMatrix::set(std::size_t i, std::size_t j, std::uint32_t value) {
  require(i < size_ && j < size_, ErrorCode::invalid_argument, "distance index out of range");
  require(i != j || value == 0, ErrorCode::invalid_argument, "diagonal distances must be zero");
  d_[i * size_ + j] = value;
  d_[j * size_ + i] = value;
}

bool DistanceMatrix::symmetric() const {
  for (std::size_t i = 0; i < size_; ++i) {
    if (d_[i * size_ + i] != 0) return false;
    for (std::size_t j = i + 1; j < size_; ++j)
      if (d_[i * size_ + j] != d_[j * size_ + i]) return false;
  }
  return true;
}

std::uint32_t DistanceMatrix::max_entry() const {
  return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end());
}

const char* to_string(MatchingMethod method) noexcept {
  return method == MatchingMethod::optimal ? "optimal" : "greedy";
}

Matching optimal_matching(const DistanceMatrix& d, std::uint64_t tie_seed) {
  check_even(d);
  const std::size_t size = d.size();
  if (size == 0) return {};
  const std::vector<std::uint32_t> jitter = pair_jitter(size, tie_seed);

  // cost' = d * scale + jitter with n * max_jitter < scale, so jitter can only
  // decide between matchings whose integer totals are equal.
  const auto pairs_needed = static_cast<std::int64_t>(size / 2);
  const std::int64_t scale = pairs_needed * (std::int64_t{1} << kJitterBits) + 1;
  const std::int64_t top = static_cast<std::int64_t>(d.max_entry()) * scale + (std::int64_t{1} << kJitterBits);

  std::vector<detail::WeightedEdge> edges;
  edges.reserve(size * (size - 1) / 2);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      const std::int64_t cost = static_cast<std::int64_t>(d(i, j)) * scale + jitter[i * size + j];
      // Even weights keep every dual update integral.
      edges.push_back({static_cast<int>(i), static_cast<int>(j), 2 * (top - cost)});
    }
  }
  const std::vector<int> mate = detail::max_weight_matching(static_cast<int>(size), edges, true);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(size / 2);
  for (std::size_t i = 0; i < size; ++i) {
    require(mate[i] >= 0, ErrorCode::invalid_argument, "matching solver left a vertex unmatched");
    const auto j = static_cast<std::size_t>(mate[i]);
    if (i < j) pairs.emplace_back(i, j);
  }
  Matching m = finish(std::move(pairs), d, MatchingMethod::optimal);
  validate_matching(m, size);
  return m;
}

Matching greedy_matching(const DistanceMatrix& d, std::uint64_t tie_seed) {
  check_even(d);
  const std::size_t size = d.size();
  const std::vector<std::uint32_t> jitter = pair_jitter(size, tie_seed);
  struct Candidate {
    std::uint32_t dist;
    std::uint32_t jitter;
    std::uint32_t i;
    std::uint32_t j;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(size * (size > 0 ? size - 1 : 0) / 2);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j)
      candidates.push_back({d(i, j), jitter[i * size + j], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.jitter != b.jitter) return a.jitter < b.jitter;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<bool> used(size, false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(size / 2);
  for (const auto& c : candidates) {
    if (used[c.i] || used[c.j]) continue;
    used[c.i] = used[c.j] = true;
    pairs.emplace_back(c.i, c.j);
    if (pairs.size() == size / 2) break;
  }
  return finish(std::move(pairs), d, MatchingMethod::greedy);
}

void validate_matching(const Matching& m, std::size_t size) {
  require(m.pairs.size() * 2 == size, ErrorCode::invalid_argument, "matching does not cover every index");
  std::vector<bool> seen(size, false);
  for (auto [i, j] : m.pairs) {
    require(i < size && j < size && i != j, ErrorCode::invalid_argument, "matching pair out of range");
    require(!seen[i] && !seen[j], ErrorCode::invalid_argument, "index appears in more than one pair");
    seen[i] = seen[j] = true;
  }
}

}  // namespace gmrbm
