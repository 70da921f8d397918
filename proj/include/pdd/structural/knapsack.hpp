#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pdd/core.hpp"

namespace pdd {

struct KnapsackItem {
  std::uint64_t cost = 0;
  std::uint64_t value = 0;
};

// Indices of items with total cost <= budget and total value >= demand.
// dp[d] is the least cost reaching value d (values capped at the demand).
inline std::optional<std::vector<std::size_t>> knapsack_decide(const std::vector<KnapsackItem>& items,
                                                                std::uint64_t budget, std::uint64_t demand) {
  if (demand == 0) return std::vector<std::size_t>{};
  const std::uint64_t total = [&] {
    std::uint64_t s = 0;
    for (const auto& it : items) s = std::min(demand, s + std::min(it.value, demand));
    return s;
  }();
  if (total < demand) return std::nullopt;
  constexpr std::uint64_t INF = std::numeric_limits<std::uint64_t>::max();
  const std::size_t D = static_cast<std::size_t>(demand);
  const std::size_t m = items.size();
  std::vector<std::uint64_t> dp(D + 1, INF);
  dp[0] = 0;
  std::vector<std::vector<char>> take(m, std::vector<char>(D + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t v = static_cast<std::size_t>(std::min(items[i].value, demand));
    for (std::size_t d = D + 1; d-- > 0;) {
      const std::size_t from = d > v ? d - v : 0;
      if (dp[from] == INF) continue;
      const std::uint64_t c = dp[from] > INF - items[i].cost ? INF : dp[from] + items[i].cost;
      if (c < dp[d]) {
        dp[d] = c;
        take[i][d] = 1;
      }
    }
  }
  if (dp[D] > budget) return std::nullopt;
  std::vector<std::size_t> out;
  std::size_t d = D;
  for (std::size_t i = m; i-- > 0 && d > 0;)
    if (take[i][d]) {
      out.push_back(i);
      const std::size_t v = static_cast<std::size_t>(std::min(items[i].value, demand));
      d = d > v ? d - v : 0;
    }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace pdd
