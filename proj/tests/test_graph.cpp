#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

#include "nestmc/graph.hpp"
#include "nestmc/rng.hpp"
#include "nestmc/seed.hpp"
#include "support.hpp"

namespace nestmc {
namespace {

using testing::complete_graph;
using testing::path_graph;
using testing::plan_of;

template <typename F>
ErrorCategory category_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCategory::Io;
}

TEST(DualGraphTest, RejectsStructuralViolations) {
  using C = ErrorCategory;
  EXPECT_EQ(category_of([] { DualGraph({"a", "a"}, {1, 1}, {{0, 1}}); }), C::DuplicateVertex);
  EXPECT_EQ(category_of([] { DualGraph({"a", "b"}, {1, 1}, {{0, 1}, {1, 1}}); }), C::SelfLoop);
  EXPECT_EQ(category_of([] { DualGraph({"a", "b"}, {1, 1}, {{0, 1}, {1, 0}}); }), C::DuplicateEdge);
  EXPECT_EQ(category_of([] { DualGraph({"a", "b"}, {1, -2}, {{0, 1}}); }), C::NegativePopulation);
  EXPECT_EQ(category_of([] { DualGraph({}, {}, {}); }), C::SchemaViolation);
  EXPECT_EQ(category_of([] { DualGraph::from_id_edges({"a", "b"}, {1, 1}, {{"a", "z"}}); }), C::UnknownVertex);
  EXPECT_EQ(category_of([] {
              DualGraph({"a", "b"}, {1, 1}, {{0, 1}}, {Election{"E", {1}, {1, 1}}});
            }),
            C::IncompleteElection);
}

TEST(DualGraphTest, DisconnectedGraphListsComponentSizes) {
  try {
    DualGraph({"a", "b", "c", "d", "e"}, {1, 1, 1, 1, 1}, {{0, 1}, {2, 3}, {3, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::DisconnectedGraph);
    EXPECT_NE(std::string(e.what()).find("[2,3]"), std::string::npos) << e.what();
  }
}

TEST(IsConnectedTest, PathExamples) {
  const auto g = path_graph(3);
  EXPECT_FALSE(is_connected(g, {0, 2}));
  EXPECT_TRUE(is_connected(g, {0, 1}));
  EXPECT_TRUE(is_connected(g, {0}));
  EXPECT_TRUE(is_connected(g, {2}));
}

TEST(IsConnectedTest, Errors) {
  const auto g = path_graph(3);
  EXPECT_EQ(category_of([&] { is_connected(g, std::span<const Vertex>{}); }), ErrorCategory::InvalidSubset);
  EXPECT_EQ(category_of([&] { is_connected(g, {0, 7}); }), ErrorCategory::UnknownVertex);
}

TEST(ContiguityTest, TwoByThreeGrid) {
  const auto g = grid_graph(2, 3);
  EXPECT_TRUE(is_contiguous_plan(g, plan_of(6, {{1, 2, 3}, {4, 5, 6}})));
  EXPECT_FALSE(is_contiguous_plan(g, plan_of(6, {{1, 3, 5}, {2, 4, 6}})));
  EXPECT_TRUE(is_contiguous_plan(g, Plan(std::vector<DistrictId>(6, 0), 1)));
}

TEST(ContiguityTest, MismatchedPlanIsAnError) {
  const auto g = grid_graph(2, 3);
  EXPECT_EQ(category_of([&] { is_contiguous_plan(g, Plan({0, 0, 1}, 2)); }), ErrorCategory::PlanGraphMismatch);
}

TEST(NestingTest, Examples) {
  const auto g = grid_graph(2, 3);
  EXPECT_TRUE(is_k_nested(g, plan_of(6, {{1, 2, 3}, {4, 5, 6}}), NestingSpec(3)));
  EXPECT_FALSE(is_k_nested(g, plan_of(6, {{1, 2}, {3, 4, 5, 6}}), NestingSpec(3)));
  EXPECT_TRUE(is_k_nested(complete_graph(3), Plan({0, 0, 0}, 1), NestingSpec(3)));
  EXPECT_THROW(NestingSpec(0), Error);
}

TEST(PopulationDeviationTest, Examples) {
  EXPECT_DOUBLE_EQ(population_deviation(path_graph(4), plan_of(4, {{1, 2}, {3, 4}})), 0.0);
  EXPECT_DOUBLE_EQ(population_deviation(path_graph(2, {3, 1}), plan_of(2, {{1}, {2}})), 0.5);
  EXPECT_DOUBLE_EQ(population_deviation(path_graph(4), plan_of(4, {{1, 2, 3}, {4}})), 0.5);
  EXPECT_EQ(category_of([] { population_deviation(path_graph(2, {0, 0}), plan_of(2, {{1}, {2}})); }),
            ErrorCategory::DegeneratePopulation);
}

TEST(QuotientGraphTest, Examples) {
  const auto rows = quotient_graph(grid_graph(2, 3), plan_of(6, {{1, 2, 3}, {4, 5, 6}}));
  EXPECT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows.edges().size(), 1u);
  EXPECT_EQ(rows.populations(), (std::vector<std::int64_t>{3, 3}));

  const auto halves = quotient_graph(path_graph(4), plan_of(4, {{1, 2}, {3, 4}}));
  EXPECT_EQ(halves.size(), 2u);
  EXPECT_EQ(halves.edges().size(), 1u);
}

TEST(QuotientGraphTest, ThreeByThreeRowsIsAPath) {
  const auto plan = plan_of(9, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
  // Expected district adjacency from cell coordinates, not from the graph.
  std::set<Edge> expected;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b) {
      const int dist = std::abs(a / 3 - b / 3) + std::abs(a % 3 - b % 3);
      const auto da = static_cast<Vertex>(plan.district_of(a)), db = static_cast<Vertex>(plan.district_of(b));
      if (dist == 1 && da != db) expected.emplace(std::min(da, db), std::max(da, db));
    }
  const auto q = quotient_graph(grid_graph(3, 3), plan);
  EXPECT_EQ(std::set<Edge>(q.edges().begin(), q.edges().end()), expected);
  EXPECT_EQ(expected, (std::set<Edge>{{0, 1}, {1, 2}}));
}

TEST(QuotientGraphTest, RejectsNonContiguousPlan) {
  EXPECT_EQ(category_of([] { quotient_graph(grid_graph(2, 3), plan_of(6, {{1, 3, 5}, {2, 4, 6}})); }),
            ErrorCategory::NotContiguous);
}

TEST(QuotientGraphTest, ConservesPopulationAndVotes) {
  const auto g = testing::toy_6x6();
  for (std::size_t arity : {3u, 4u, 6u, 9u, 12u}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Plan plan = random_nested_seed(g, NestingSpec(arity), seed);
      const auto q = quotient_graph(g, plan);  // constructor rejects disconnected results
      EXPECT_EQ(q.size(), 36 / arity);
      EXPECT_EQ(q.total_population(), g.total_population());
      const auto& e = g.elections().front();
      const auto& qe = q.elections().front();
      EXPECT_EQ(std::accumulate(qe.party_a.begin(), qe.party_a.end(), std::int64_t{0}),
                std::accumulate(e.party_a.begin(), e.party_a.end(), std::int64_t{0}));
      EXPECT_EQ(std::accumulate(qe.party_b.begin(), qe.party_b.end(), std::int64_t{0}),
                std::accumulate(e.party_b.begin(), e.party_b.end(), std::int64_t{0}));
    }
  }
}

TEST(PlanPropertyTest, NestedImpliesContiguousWithEqualSizes) {
  const auto g = grid_graph(3, 4);
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<DistrictId> a(12);
    for (auto& d : a) d = static_cast<DistrictId>(rng.index(4));
    std::vector<long long> labels(a.begin(), a.end());
    const Plan plan = Plan::from_labels(labels);
    if (is_k_nested(g, plan, NestingSpec(3))) {
      EXPECT_TRUE(is_contiguous_plan(g, plan));
      for (std::size_t s : plan.district_sizes()) EXPECT_EQ(s, 3u);
    }
  }
}

TEST(PlanPropertyTest, StatisticsAreLabelInvariant) {
  const auto g = testing::toy_6x6();
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Plan plan = random_nested_seed(g, NestingSpec(4), seed);
    std::vector<DistrictId> perm(static_cast<std::size_t>(plan.num_districts()));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    std::vector<DistrictId> relabeled;
    for (DistrictId d : plan.assignment()) relabeled.push_back(perm[static_cast<std::size_t>(d)]);
    const Plan other(relabeled, plan.num_districts());
    EXPECT_EQ(population_deviation(g, plan), population_deviation(g, other));
    EXPECT_EQ(plan_digest(plan), plan_digest(other));
    EXPECT_EQ(canonical(plan), canonical(other));
  }
}

TEST(PlanTest, FromLabelsClosesGaps) {
  const Plan p = Plan::from_labels({1, 3, 3, 1});
  EXPECT_EQ(p.num_districts(), 2);
  EXPECT_EQ(p.assignment(), (std::vector<DistrictId>{0, 1, 1, 0}));
  EXPECT_THROW(Plan({0, 0}, 2), Error);
}

}  // namespace
}  // namespace nestmc
