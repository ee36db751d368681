#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace gmrbm {

/// Symmetric non-negative integer dissimilarity matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : size_(size), d_(size * size, 0) {}

  std::size_t size() const noexcept { return size_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return d_[i * size_ + j]; }

  /// Sets d(i, j) and d(j, i).
  void set(std::size_t i, std::size_t j, std::uint32_t value);

  bool symmetric() const;
  std::uint32_t max_entry() const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint32_t> d_;
};

enum class MatchingMethod { optimal, greedy };

const char* to_string(MatchingMethod method) noexcept;

struct Matching {
  /// Each pair has first < second; pairs sorted by first.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::uint64_t total_cost = 0;
  MatchingMethod method = MatchingMethod::optimal;
};

/// Minimum-cost perfect matching on the complete graph over D's indices.
/// Equal-cost alternatives are chosen by seeded jitter that never changes
/// which totals are minimal.
Matching optimal_matching(const DistanceMatrix& d, std::uint64_t tie_seed);

/// Repeatedly pairs the closest unmatched points (ties ordered by the same jitter).
Matching greedy_matching(const DistanceMatrix& d, std::uint64_t tie_seed);

/// Throws unless every index of a size-n matrix appears in exactly one pair.
void validate_matching(const Matching& m, std::size_t size);

namespace detail {

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm,
/// O(V^3) primal-dual). Returns mate[v] or -1. With max_cardinality set,
/// only maximum-cardinality matchings are considered.
struct WeightedEdge {
  int u;
  int v;
  std::int64_t weight;
};
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality);

}  // namespace detail

}  // namespace gmrbm
