#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rankbm::ranking {

/// order[k] is the (0-based) name of the k-th ranked particle. Ties in
/// position are broken by the smaller name.
using RankPermutation = std::vector<std::size_t>;

/// Strict total order used for ranking: by value, then by name.
inline bool ranks_below(std::span<const double> x, std::size_t i, std::size_t j) noexcept {
  return x[i] < x[j] || (x[i] == x[j] && i < j);
}

RankPermutation rank_permutation(std::span<const double> x);

/// Re-sorts an existing permutation after positions moved. Insertion sort,
/// so O(N) when few ranks changed. Produces the same permutation as
/// rank_permutation(x).
void rerank(std::span<const double> x, RankPermutation& order) noexcept;

struct RankedView {
  std::vector<double> ranked;  // Y, nondecreasing
  std::vector<double> gaps;    // Z_k = Y_{k+1} - Y_k, length N-1
};

RankedView ranked_and_gaps(std::span<const double> x);

}  // namespace rankbm::ranking
