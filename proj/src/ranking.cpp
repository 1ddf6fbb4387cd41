#include "rankbm/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankbm/error.hpp"

namespace rankbm::ranking {

RankPermutation rank_permutation(std::span<const double> x) {
  if (x.empty()) throw ValidationError("cannot rank an empty vector");
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("cannot rank non-finite positions");
  }
  RankPermutation order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  return order;
}

void rerank(std::span<const double> x, RankPermutation& order) noexcept {
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t name = order[k];
    std::size_t j = k;
    while (j > 0 && ranks_below(x, name, order[j - 1])) {
      order[j] = order[j - 1];
      --j;
    }
    order[j] = name;
  }
}

RankedView ranked_and_gaps(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("ranked view needs at least 2 particles");
  const auto order = rank_permutation(x);
  RankedView view;
  view.ranked.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) view.ranked[k] = x[order[k]];
  view.gaps.resize(x.size() - 1);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    view.gaps[k] = view.ranked[k + 1] - view.ranked[k];
  }
  return view;
}

}  // namespace rankbm::ranking
