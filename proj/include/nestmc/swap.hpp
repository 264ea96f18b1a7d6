#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/rng.hpp"

namespace nestmc {

struct SwapConfig {
  std::size_t steps = 1'000'000;
  std::uint64_t rng_seed = 0;
  std::size_t max_rejections_per_step = 100'000;
  NestingSpec nesting{3};

  void validate() const {
    if (steps < 1) throw Error(ErrorCategory::InvalidConfig, "steps must be at least 1");
    if (max_rejections_per_step < 1)
      throw Error(ErrorCategory::InvalidConfig, "max_rejections_per_step must be at least 1");
  }
};

namespace detail {

inline bool swap_keeps_contiguity(const DualGraph& graph, const Plan& plan, Vertex u, Vertex v,
                                  std::size_t size_u, std::size_t size_v, std::vector<char>& scratch) {
  const DistrictId du = plan.district_of(u);
  const DistrictId dv = plan.district_of(v);
  if (du == dv) return true;
  auto swapped = [&](Vertex w) { return w == u ? dv : (w == v ? du : plan.district_of(w)); };
  // After the exchange v sits in du and u sits in dv.
  return district_connected(graph, v, size_u, du, swapped, scratch) &&
         district_connected(graph, u, size_v, dv, swapped, scratch);
}

}  // namespace detail

/// True iff exchanging the districts of u and v leaves both affected
/// districts connected. Same-district pairs (including u == v) are no-ops
/// and always valid.
inline bool is_valid_swap(const DualGraph& graph, const Plan& plan, Vertex u, Vertex v) {
  require_matching(graph, plan);
  if (u >= graph.size() || v >= graph.size())
    throw Error(ErrorCategory::UnknownVertex, "swap names a vertex outside the graph");
  const auto sizes = plan.district_sizes();
  std::vector<char> scratch;
  return detail::swap_keeps_contiguity(graph, plan, u, v, sizes[static_cast<std::size_t>(plan.district_of(u))],
                                       sizes[static_cast<std::size_t>(plan.district_of(v))], scratch);
}

struct SwapMove {
  Vertex u;
  Vertex v;
  bool noop;
  std::size_t rejections;  // invalid proposals drawn before this one
};

/// State of one Swap chain over k:1 nested plans. Owns its plan and RNG.
class SwapChain {
 public:
  SwapChain(const DualGraph& graph, Plan initial, const SwapConfig& config)
      : graph_(&graph), plan_(std::move(initial)), config_(config), rng_(config.rng_seed) {
    config_.validate();
    require_matching(graph, plan_);
    if (!is_k_nested(graph, plan_, config_.nesting))
      throw Error(ErrorCategory::InvalidSeed,
                  "initial plan is not " + std::to_string(config_.nesting.arity) + ":1 nested");
    sizes_ = plan_.district_sizes();
  }

  /// Two vertices drawn independently and uniformly, with replacement.
  std::pair<Vertex, Vertex> propose_pair() {
    const Vertex u = rng_.index(graph_->size());
    const Vertex v = rng_.index(graph_->size());
    return {u, v};
  }

  /// Redraws pairs until one yields a contiguous plan, then applies it.
  SwapMove step() {
    for (std::size_t rejected = 0; rejected < config_.max_rejections_per_step; ++rejected) {
      auto [u, v] = propose_pair();
      const DistrictId du = plan_.district_of(u);
      const DistrictId dv = plan_.district_of(v);
      if (du == dv) return {u, v, true, rejected};
      if (detail::swap_keeps_contiguity(*graph_, plan_, u, v, sizes_[static_cast<std::size_t>(du)],
                                        sizes_[static_cast<std::size_t>(dv)], scratch_)) {
        plan_.swap_assignments(u, v);
        return {u, v, false, rejected};
      }
    }
    throw Error(ErrorCategory::StuckChain, "no valid swap found in " +
                                               std::to_string(config_.max_rejections_per_step) +
                                               " proposals; the plan may be locked");
  }

  const Plan& plan() const noexcept { return plan_; }
  const DualGraph& graph() const noexcept { return *graph_; }

 private:
  const DualGraph* graph_;
  Plan plan_;
  SwapConfig config_;
  Rng rng_;
  std::vector<std::size_t> sizes_;
  std::vector<char> scratch_;
};

/// Runs config.steps accepted steps and calls sink(step, plan) after each,
/// steps numbered from 1. No-op moves count as steps.
template <typename Sink>
void run_swap(const DualGraph& graph, const Plan& initial, const SwapConfig& config, Sink&& sink) {
  SwapChain chain(graph, initial, config);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    chain.step();
    sink(step, chain.plan());
  }
}

}  // namespace nestmc
