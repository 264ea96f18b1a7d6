#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nestmc/enumerate.hpp"
#include "nestmc/swap.hpp"
#include "support.hpp"

namespace nestmc {
namespace {

using testing::plan_of;

Plan rows3x3() { return plan_of(9, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}); }

SwapConfig config(std::size_t steps, std::uint64_t seed, std::size_t arity = 3) {
  SwapConfig c;
  c.steps = steps;
  c.rng_seed = seed;
  c.nesting = NestingSpec(arity);
  return c;
}

// Upper 0.001 quantiles of the chi-square distribution.
constexpr double kChiSquare8 = 26.124;
constexpr double kChiSquare80 = 124.839;

double chi_square(const std::vector<double>& observed, double expected) {
  double s = 0.0;
  for (double o : observed) s += (o - expected) * (o - expected) / expected;
  return s;
}

TEST(ProposePairTest, DrawsAreUniformWithReplacement) {
  const auto g = grid_graph(3, 3);
  SwapChain chain(g, rows3x3(), config(1, 7));
  constexpr int kDraws = 100'000;
  std::vector<double> first(9, 0.0), second(9, 0.0), joint(81, 0.0);
  int equal = 0;
  for (int i = 0; i < kDraws; ++i) {
    auto [u, v] = chain.propose_pair();
    ++first[u];
    ++second[v];
    ++joint[u * 9 + v];
    equal += (u == v);
  }
  EXPECT_LT(chi_square(first, kDraws / 9.0), kChiSquare8);
  EXPECT_LT(chi_square(second, kDraws / 9.0), kChiSquare8);
  EXPECT_LT(chi_square(joint, kDraws / 81.0), kChiSquare80);
  // Binomial(1e5, 1/9): five standard deviations is about 0.005.
  EXPECT_NEAR(equal / double(kDraws), 1.0 / 9.0, 0.005);
}

TEST(ProposePairTest, SingleVertexGraph) {
  const DualGraph g({"only"}, {1}, {});
  SwapChain chain(g, Plan({0}, 1), config(1, 1, 1));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(chain.propose_pair(), (std::pair<Vertex, Vertex>{0, 0}));
  EXPECT_TRUE(chain.step().noop);
}

TEST(IsValidSwapTest, ThreeByThreeExamples) {
  const auto g = grid_graph(3, 3);
  const Plan plan = rows3x3();
  EXPECT_TRUE(is_valid_swap(g, plan, 2, 3));
  Plan swapped = plan;
  swapped.swap_assignments(2, 3);
  EXPECT_EQ(swapped, plan_of(9, {{1, 2, 4}, {3, 5, 6}, {7, 8, 9}}));
  EXPECT_TRUE(is_contiguous_plan(g, swapped));

  EXPECT_FALSE(is_valid_swap(g, plan, 0, 4));
  Plan broken = plan;
  broken.swap_assignments(0, 4);
  EXPECT_FALSE(is_contiguous_plan(g, broken));

  for (Vertex u = 0; u < 9; ++u) EXPECT_TRUE(is_valid_swap(g, plan, u, u));
}

TEST(IsValidSwapTest, AgreesWithContiguityCheck) {
  const auto g = grid_graph(3, 4);
  for (const Plan& plan : enumerate_nestings(g, NestingSpec(3)))
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v = 0; v < g.size(); ++v) {
        Plan after = plan;
        after.swap_assignments(u, v);
        ASSERT_EQ(is_valid_swap(g, plan, u, v), is_contiguous_plan(g, after));
        ASSERT_EQ(is_valid_swap(g, plan, u, v), is_valid_swap(g, plan, v, u));
      }
}

TEST(IsValidSwapTest, MovesAreSymmetric) {
  const auto g = grid_graph(3, 4);
  for (const Plan& plan : enumerate_nestings(g, NestingSpec(3)))
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v = u + 1; v < g.size(); ++v) {
        if (!is_valid_swap(g, plan, u, v)) continue;
        Plan after = plan;
        after.swap_assignments(u, v);
        ASSERT_TRUE(is_valid_swap(g, after, u, v));
        after.swap_assignments(u, v);
        ASSERT_EQ(after, plan);
      }
}

TEST(SwapStepTest, PathHasOnlyNoOps) {
  const auto g = testing::path_graph(6);
  const Plan start = plan_of(6, {{1, 2, 3}, {4, 5, 6}});
  SwapChain chain(g, start, config(1, 3));
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(chain.step().noop);
    EXPECT_EQ(chain.plan(), start);
  }
}

TEST(SwapStepTest, GuardRaisesStuckChain) {
  const auto g = testing::path_graph(6);
  SwapConfig c = config(1, 3);
  c.max_rejections_per_step = 1;
  SwapChain chain(g, plan_of(6, {{1, 2, 3}, {4, 5, 6}}), c);
  try {
    for (int i = 0; i < 200; ++i) chain.step();
    FAIL() << "half of all proposals are invalid; the guard should trip";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::StuckChain);
  }
}

TEST(SwapStepTest, TrajectoryStaysNestedWithFixedSizes) {
  const auto g = grid_graph(3, 3);
  const auto nestings = enumerate_nestings(g, NestingSpec(3));
  const std::set<std::vector<DistrictId>> valid = [&] {
    std::set<std::vector<DistrictId>> s;
    for (const auto& p : nestings) s.insert(p.assignment());
    return s;
  }();
  std::set<std::vector<DistrictId>> visited;
  std::size_t moves = 0;
  run_swap(g, rows3x3(), config(10'000, 17), [&](std::size_t, const Plan& plan) {
    ASSERT_TRUE(is_k_nested(g, plan, NestingSpec(3)));
    ASSERT_EQ(plan.district_sizes(), (std::vector<std::size_t>{3, 3, 3}));
    visited.insert(canonical_labels(plan));
    ++moves;
  });
  EXPECT_EQ(moves, 10'000u);
  for (const auto& labels : visited) EXPECT_TRUE(valid.contains(labels));
  EXPECT_EQ(nestings.size(), 10u);
}

TEST(RunSwapTest, RejectsBadConfigAndSeed) {
  const auto g = grid_graph(3, 3);
  try {
    run_swap(g, rows3x3(), config(0, 1), [](std::size_t, const Plan&) {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::InvalidConfig);
  }
  try {
    SwapChain(g, plan_of(9, {{1, 2}, {3, 4, 5, 6, 7}, {8, 9}}), config(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::InvalidSeed);
  }
  try {
    SwapChain(g, plan_of(9, {{1, 3, 5}, {2, 4, 6}, {7, 8, 9}}), config(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::InvalidSeed);
  }
}

TEST(RunSwapTest, Deterministic) {
  const auto g = grid_graph(3, 4);
  const Plan start = enumerate_nestings(g, NestingSpec(3)).front();
  auto trace = [&](std::uint64_t seed) {
    std::vector<std::uint64_t> digests;
    run_swap(g, start, config(5000, seed), [&](std::size_t, const Plan& p) { digests.push_back(plan_digest(p)); });
    return digests;
  };
  EXPECT_EQ(trace(99), trace(99));
  EXPECT_NE(trace(99), trace(100));
}

}  // namespace
}  // namespace nestmc
