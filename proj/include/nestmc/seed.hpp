#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/rng.hpp"

namespace nestmc {

/// Random k:1 nested plan by randomized greedy growth.
///
/// Each district starts at a random unassigned vertex of minimum remaining
/// degree and grows by uniformly chosen frontier vertices until it has k
/// members. A dead end (empty frontier, or a leftover component whose size
/// is not a multiple of k) restarts the whole construction.
inline Plan random_nested_seed(const DualGraph& graph, const NestingSpec& spec, std::uint64_t rng_seed,
                               std::size_t max_restarts = 10'000) {
  const std::size_t n = graph.size();
  const std::size_t k = spec.arity;
  if (n % k != 0)
    throw Error(ErrorCategory::NoNestingExists,
                std::to_string(n) + " vertices are not divisible by " + std::to_string(k));
  Rng rng(rng_seed);
  std::vector<DistrictId> assign(n);
  std::vector<char> seen;
  std::vector<Vertex> stack;

  auto remainder_divisible = [&]() {
    seen.assign(n, 0);
    for (Vertex s = 0; s < n; ++s) {
      if (assign[s] >= 0 || seen[s]) continue;
      std::size_t count = 0;
      stack.assign(1, s);
      seen[s] = 1;
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        ++count;
        for (Vertex w : graph.neighbors(v))
          if (assign[w] < 0 && !seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      if (count % k != 0) return false;
    }
    return true;
  };

  auto attempt = [&]() {
    std::fill(assign.begin(), assign.end(), -1);
    const auto districts = static_cast<DistrictId>(n / k);
    for (DistrictId d = 0; d < districts; ++d) {
      std::size_t best_degree = std::numeric_limits<std::size_t>::max();
      std::vector<Vertex> starts;
      for (Vertex v = 0; v < n; ++v) {
        if (assign[v] >= 0) continue;
        const auto degree = static_cast<std::size_t>(
            std::count_if(graph.neighbors(v).begin(), graph.neighbors(v).end(), [&](Vertex w) { return assign[w] < 0; }));
        if (degree < best_degree) {
          best_degree = degree;
          starts.clear();
        }
        if (degree == best_degree) starts.push_back(v);
      }
      std::vector<Vertex> region{starts[rng.index(starts.size())]};
      assign[region.front()] = d;
      while (region.size() < k) {
        std::vector<Vertex> frontier;
        for (Vertex v : region)
          for (Vertex w : graph.neighbors(v))
            if (assign[w] < 0) frontier.push_back(w);
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        if (frontier.empty()) return false;
        const Vertex pick = frontier[rng.index(frontier.size())];
        assign[pick] = d;
        region.push_back(pick);
      }
      if (!remainder_divisible()) return false;
    }
    return true;
  };

  for (std::size_t restart = 0; restart < max_restarts; ++restart)
    if (attempt()) return canonical(Plan(assign, static_cast<int>(n / k)));
  throw Error(ErrorCategory::SeedGenerationFailed,
              "no nested plan found in " + std::to_string(max_restarts) + " restarts");
}

}  // namespace nestmc
