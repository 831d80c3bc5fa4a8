#pragma once

// Brute-force reference for swing counts. Deliberately naive and independent
// of the library: plain integer weights, every subset summed from scratch,
// the quota compared by cross-multiplication.

#include <cstdint>
#include <vector>

namespace oracle {

struct Game {
  std::int64_t quota_num;
  std::int64_t quota_den;
  std::vector<std::int64_t> weights;
};

inline bool wins(const Game& g, std::int64_t weight, std::int64_t total) {
  return weight * g.quota_den >= g.quota_num * total;
}

inline std::vector<std::int64_t> swings(const Game& g) {
  const std::size_t n = g.weights.size();
  std::int64_t total = 0;
  for (auto w : g.weights) total += w;
  std::vector<std::int64_t> beta(n, 0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) sum += g.weights[i];
    if (!wins(g, sum, total)) continue;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i & 1u) && !wins(g, sum - g.weights[i], total)) ++beta[i];
  }
  return beta;
}

}  // namespace oracle
