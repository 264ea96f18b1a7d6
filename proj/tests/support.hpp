#pragma once

#include <string>
#include <vector>

#include "nestmc/nestmc.hpp"

namespace nestmc::testing {

inline std::string data_path(const std::string& name) { return std::string(NESTMC_SOURCE_DIR) + "/data/" + name; }
inline std::string bad_path(const std::string& name) {
  return std::string(NESTMC_SOURCE_DIR) + "/tests/fixtures/bad/" + name;
}

inline DualGraph path_graph(std::size_t n, std::vector<std::int64_t> pops = {}) {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(std::string(1, static_cast<char>('a' + i)));
    if (i + 1 < n) edges.emplace_back(i, i + 1);
  }
  if (pops.empty()) pops.assign(n, 1);
  return DualGraph(ids, pops, edges);
}

inline DualGraph complete_graph(std::size_t n) {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(std::string(1, static_cast<char>('a' + i)));
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return DualGraph(ids, std::vector<std::int64_t>(n, 1), edges);
}

/// Plan from 1-based vertex ids grouped into districts (district order = label order).
inline Plan plan_of(std::size_t n, const std::vector<std::vector<std::size_t>>& districts) {
  std::vector<DistrictId> a(n, -1);
  for (std::size_t d = 0; d < districts.size(); ++d)
    for (std::size_t v : districts[d]) a[v - 1] = static_cast<DistrictId>(d);
  return Plan(a, static_cast<int>(districts.size()));
}

/// The 6x6 one-voter-per-cell toy election used across the tests.
inline Election toy_6x6_election() {
  static const char* rows[] = {"AABABB", "ABBABA", "BAABAB", "AABBBA", "BABAAB", "ABABBA"};
  Election e{"TOY", {}, {}};
  for (const char* r : rows)
    for (int c = 0; c < 6; ++c) {
      e.party_a.push_back(r[c] == 'A');
      e.party_b.push_back(r[c] == 'B');
    }
  return e;
}

inline DualGraph toy_6x6() { return grid_graph(6, 6, {toy_6x6_election()}); }

}  // namespace nestmc::testing
