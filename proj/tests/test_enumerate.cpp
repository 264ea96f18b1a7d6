#include <gtest/gtest.h>

#include <set>

#include "nestmc/enumerate.hpp"
#include "oracle/brute_force.hpp"
#include "support.hpp"

namespace nestmc {
namespace {

// Library graph with the same vertex numbering as an oracle adjacency list.
DualGraph from_adjacency(const oracle::Adjacency& adj) {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    ids.push_back("v" + std::to_string(v));
    for (int w : adj[v])
      if (static_cast<std::size_t>(w) > v) edges.emplace_back(v, static_cast<Vertex>(w));
  }
  return DualGraph(ids, std::vector<std::int64_t>(adj.size(), 1), edges);
}

std::set<std::vector<int>> as_labels(const std::vector<Plan>& plans) {
  std::set<std::vector<int>> out;
  for (const auto& p : plans) out.insert(std::vector<int>(p.assignment().begin(), p.assignment().end()));
  return out;
}

struct Instance {
  const char* name;
  oracle::Adjacency adj;
  std::size_t arity;
  std::size_t expected;
};

class NestingOracleTest : public ::testing::TestWithParam<Instance> {};

TEST_P(NestingOracleTest, MatchesBruteForce) {
  const Instance& in = GetParam();
  const auto oracle_set = oracle::balanced_partitions(in.adj, static_cast<int>(in.adj.size() / in.arity),
                                                      static_cast<int>(in.arity));
  ASSERT_EQ(oracle_set.size(), in.expected);
  const auto plans = enumerate_nestings(from_adjacency(in.adj), NestingSpec(in.arity));
  EXPECT_EQ(plans.size(), in.expected);
  EXPECT_EQ(as_labels(plans), oracle_set);
}

INSTANTIATE_TEST_SUITE_P(SmallGraphs, NestingOracleTest,
                         ::testing::Values(Instance{"K3", oracle::complete(3), 3, 1},
                                           Instance{"P6", oracle::path(6), 3, 1},
                                           Instance{"Grid2x3", oracle::grid(2, 3), 3, 3},
                                           Instance{"Grid3x3", oracle::grid(3, 3), 3, 10},
                                           Instance{"Grid4x3", oracle::grid(4, 3), 3, 23},
                                           Instance{"Grid6x2", oracle::grid(6, 2), 3, 11},
                                           Instance{"Grid2x2Pairs", oracle::grid(2, 2), 2, 2},
                                           Instance{"P4Pairs", oracle::path(4), 2, 1}),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(EnumerateTest, NestingsAreValidAndDistinct) {
  const auto g = grid_graph(4, 3);
  const auto plans = enumerate_nestings(g, NestingSpec(3));
  std::set<std::vector<DistrictId>> distinct;
  for (const auto& p : plans) {
    EXPECT_TRUE(is_k_nested(g, p, NestingSpec(3)));
    EXPECT_EQ(canonical_labels(p), p.assignment());
    distinct.insert(p.assignment());
  }
  EXPECT_EQ(distinct.size(), plans.size());
}

TEST(EnumerateTest, CountIndependentOfVertexOrder) {
  const auto adj = oracle::grid(3, 4);
  // Reverse the numbering: vertex v becomes n-1-v.
  const std::size_t n = adj.size();
  oracle::Adjacency reversed(n);
  for (std::size_t v = 0; v < n; ++v)
    for (int w : adj[v]) reversed[n - 1 - v].push_back(static_cast<int>(n - 1) - w);
  EXPECT_EQ(enumerate_nestings(from_adjacency(adj), NestingSpec(3)).size(),
            enumerate_nestings(from_adjacency(reversed), NestingSpec(3)).size());
  EXPECT_EQ(count_balanced_partitions(from_adjacency(adj), 2, 6),
            count_balanced_partitions(from_adjacency(reversed), 2, 6));
}

TEST(EnumerateTest, BalancedPartitionsMatchBruteForce) {
  const auto adj = oracle::grid(3, 4);
  for (int blocks : {2, 3, 4}) {
    const int size = 12 / blocks;
    const auto plans = enumerate_balanced_partitions(from_adjacency(adj), blocks, static_cast<std::size_t>(size));
    EXPECT_EQ(as_labels(plans), oracle::balanced_partitions(adj, blocks, size)) << blocks << " blocks";
  }
}

TEST(EnumerateTest, Errors) {
  try {
    enumerate_nestings(grid_graph(6, 6), NestingSpec(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::TooLarge);
  }
  try {
    enumerate_nestings(grid_graph(2, 2), NestingSpec(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::NoNestingExists);
  }
  try {
    count_balanced_partitions(grid_graph(2, 3), 4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::NoPartitionExists);
  }
}

TEST(SwapReachabilityTest, MatchesOracleClosure) {
  struct Case {
    oracle::Adjacency adj;
    std::vector<int> start;
    std::size_t expected;
  };
  const std::vector<Case> cases{
      {oracle::grid(3, 3), {0, 0, 0, 1, 1, 1, 2, 2, 2}, 10},
      {oracle::grid(2, 3), {0, 0, 0, 1, 1, 1}, 3},
      {oracle::path(6), {0, 0, 0, 1, 1, 1}, 1},
  };
  for (const auto& c : cases) {
    const auto closure = oracle::swap_closure(c.adj, c.start);
    ASSERT_EQ(closure.size(), c.expected);
    const auto g = from_adjacency(c.adj);
    const Plan start(std::vector<DistrictId>(c.start.begin(), c.start.end()), c.start.back() + 1);
    const auto reached = swap_reachability(g, NestingSpec(3), start);
    EXPECT_EQ(as_labels(reached), closure);
    const auto all = as_labels(enumerate_nestings(g, NestingSpec(3)));
    for (const auto& labels : as_labels(reached)) EXPECT_TRUE(all.contains(labels));
  }
}

TEST(SwapReachabilityTest, Errors) {
  const auto g = grid_graph(3, 3);
  try {
    swap_reachability(g, NestingSpec(3), testing::plan_of(9, {{1, 3, 5}, {2, 4, 6}, {7, 8, 9}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::InvalidSeed);
  }
  try {
    swap_reachability(grid_graph(6, 6), NestingSpec(3), random_nested_seed(grid_graph(6, 6), NestingSpec(3), 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::TooLarge);
  }
}

}  // namespace
}  // namespace nestmc
