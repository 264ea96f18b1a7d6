#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/rng.hpp"

namespace nestmc {

struct RecomConfig {
  std::size_t steps = 1;
  std::uint64_t rng_seed = 0;
  double epsilon = 0.05;
  std::size_t max_tree_attempts = 1000;
  int num_districts = 2;

  void validate() const {
    if (steps < 1) throw Error(ErrorCategory::InvalidConfig, "steps must be at least 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error(ErrorCategory::InvalidConfig, "epsilon must lie in [0, 1)");
    if (max_tree_attempts < 1) throw Error(ErrorCategory::InvalidConfig, "max_tree_attempts must be at least 1");
    if (num_districts < 1) throw Error(ErrorCategory::InvalidConfig, "num_districts must be at least 1");
  }
};

/// Edge list of a tree over global vertex indices.
using Tree = std::vector<Edge>;

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

// `local` maps global vertex -> position in `region`, or -1 outside it.
inline Tree spanning_tree_in(const DualGraph& graph, std::span<const Vertex> region, const std::vector<int>& local,
                             Rng& rng) {
  struct Weighted {
    double w;
    Vertex u, v;
  };
  std::vector<Weighted> candidates;
  for (Vertex u : region)
    for (Vertex v : graph.neighbors(u))
      if (u < v && local[v] >= 0) candidates.push_back({rng.unit(), u, v});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Weighted& a, const Weighted& b) { return a.w < b.w; });

  DisjointSets sets(region.size());
  Tree tree;
  tree.reserve(region.size() > 0 ? region.size() - 1 : 0);
  for (const auto& c : candidates) {
    if (sets.unite(static_cast<std::size_t>(local[c.u]), static_cast<std::size_t>(local[c.v]))) {
      tree.emplace_back(c.u, c.v);
      if (tree.size() + 1 == region.size()) break;
    }
  }
  return tree;
}

// Tree rooted at its smallest vertex, stored in breadth-first order:
// parent[i] < i for i > 0, and subtree_pop[i] is the population below order[i].
struct RootedTree {
  std::vector<Vertex> order;
  std::vector<std::size_t> parent;
  std::vector<std::int64_t> subtree_pop;
  std::vector<std::vector<std::size_t>> children;
};

inline RootedTree root_tree(const Tree& tree, const std::vector<std::int64_t>& populations) {
  RootedTree rt;
  if (tree.empty()) return rt;
  std::vector<Vertex> verts;
  for (auto [u, v] : tree) {
    verts.push_back(u);
    verts.push_back(v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  auto pos = [&](Vertex v) {
    return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  std::vector<std::vector<std::size_t>> adj(verts.size());
  for (auto [u, v] : tree) {
    adj[pos(u)].push_back(pos(v));
    adj[pos(v)].push_back(pos(u));
  }

  const std::size_t m = verts.size();
  std::vector<std::size_t> rank(m, m);  // sorted position -> BFS position
  std::vector<std::size_t> bfs{0};
  rank[0] = 0;
  rt.parent.assign(m, m);
  rt.children.assign(m, {});
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (std::size_t w : adj[bfs[i]]) {
      if (rank[w] != m) continue;
      rank[w] = bfs.size();
      rt.parent[bfs.size()] = i;
      rt.children[i].push_back(bfs.size());
      bfs.push_back(w);
    }
  }
  rt.order.reserve(m);
  rt.subtree_pop.assign(m, 0);
  for (std::size_t x : bfs) rt.order.push_back(verts[x]);
  for (std::size_t i = m; i-- > 0;) {
    rt.subtree_pop[i] += populations.at(rt.order[i]);
    if (i > 0) rt.subtree_pop[rt.parent[i]] += rt.subtree_pop[i];
  }
  return rt;
}

// Uniform choice among tree edges whose two sides both satisfy `balanced`.
// The returned edge is (parent, child); the child side is the subtree.
template <typename Balanced>
std::optional<Edge> balanced_cut(const RootedTree& rt, Balanced&& balanced, Rng& rng) {
  if (rt.order.size() < 2) return std::nullopt;
  const std::int64_t total = rt.subtree_pop[0];
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i < rt.order.size(); ++i) {
    const std::int64_t below = rt.subtree_pop[i];
    if (balanced(below) && balanced(total - below)) candidates.push_back(i);
  }
  if (candidates.empty()) return std::nullopt;
  const std::size_t pick = candidates[rng.index(candidates.size())];
  return Edge{rt.order[rt.parent[pick]], rt.order[pick]};
}

inline std::vector<Vertex> subtree_vertices(const RootedTree& rt, Vertex child) {
  std::size_t start = static_cast<std::size_t>(std::find(rt.order.begin(), rt.order.end(), child) - rt.order.begin());
  std::vector<Vertex> out;
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    out.push_back(rt.order[x]);
    for (std::size_t c : rt.children[x]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Districts on either side of a uniformly chosen cut edge, smaller id first.
inline std::pair<DistrictId, DistrictId> select_merge_pair(const DualGraph& graph, const Plan& plan, Rng& rng) {
  require_matching(graph, plan);
  std::vector<const Edge*> cut;
  for (const auto& e : graph.edges())
    if (plan.district_of(e.first) != plan.district_of(e.second)) cut.push_back(&e);
  if (cut.empty()) throw Error(ErrorCategory::DegeneratePlan, "plan has no cut edges to merge across");
  const Edge& e = *cut[rng.index(cut.size())];
  auto a = plan.district_of(e.first);
  auto b = plan.district_of(e.second);
  return {std::min(a, b), std::max(a, b)};
}

/// Spanning tree of the induced subgraph on `subset`: i.i.d. uniform edge
/// weights followed by Kruskal's minimum spanning tree.
inline Tree random_spanning_tree(const DualGraph& graph, std::span<const Vertex> subset, Rng& rng) {
  if (subset.empty()) throw Error(ErrorCategory::InvalidSubset, "subset is empty");
  if (!is_connected(graph, subset)) throw Error(ErrorCategory::NotConnected, "induced subgraph is not connected");
  std::vector<Vertex> region(subset.begin(), subset.end());
  std::sort(region.begin(), region.end());
  region.erase(std::unique(region.begin(), region.end()), region.end());
  std::vector<int> local(graph.size(), -1);
  for (std::size_t i = 0; i < region.size(); ++i) local[region[i]] = static_cast<int>(i);
  return detail::spanning_tree_in(graph, region, local, rng);
}

/// A tree edge whose removal leaves both sides within `epsilon` of `ideal`
/// (relative), chosen uniformly among all such edges; nullopt if none.
inline std::optional<Edge> find_balanced_cut(const Tree& tree, const std::vector<std::int64_t>& populations,
                                             double ideal, double epsilon, Rng& rng) {
  const auto rt = detail::root_tree(tree, populations);
  auto balanced = [&](std::int64_t p) { return std::abs(static_cast<double>(p) - ideal) <= epsilon * ideal; };
  return detail::balanced_cut(rt, balanced, rng);
}

/// Mutable ReCom chain state over a unit-level graph.
class RecomChain {
 public:
  RecomChain(const DualGraph& graph, Plan initial, const RecomConfig& config)
      : RecomChain(graph, std::move(initial), config, Rng(config.rng_seed)) {}

  RecomChain(const DualGraph& graph, Plan initial, const RecomConfig& config, Rng rng)
      : graph_(&graph), plan_(std::move(initial)), config_(config), rng_(std::move(rng)), local_(graph.size(), -1) {
    config_.validate();
    require_matching(graph, plan_);
    if (plan_.num_districts() != config_.num_districts)
      throw Error(ErrorCategory::InvalidSeed, "initial plan has " + std::to_string(plan_.num_districts()) +
                                                  " districts, config asks for " +
                                                  std::to_string(config_.num_districts));
    if (plan_.num_districts() < 2) throw Error(ErrorCategory::InvalidSeed, "ReCom needs at least two districts");
    if (!is_contiguous_plan(graph, plan_)) throw Error(ErrorCategory::InvalidSeed, "initial plan is not contiguous");
    if (population_deviation(graph, plan_) > config_.epsilon)
      throw Error(ErrorCategory::InvalidSeed, "initial plan exceeds the population tolerance");
  }

  /// One merge-pair draw followed by up to max_tree_attempts (tree, cut)
  /// draws. Throws StepFailed if no balanced cut turns up; the plan is
  /// unchanged in that case.
  std::pair<DistrictId, DistrictId> try_step() {
    const auto [d1, d2] = select_merge_pair(*graph_, plan_, rng_);
    std::vector<Vertex> region;
    for (Vertex v = 0; v < graph_->size(); ++v) {
      const DistrictId d = plan_.district_of(v);
      if (d == d1 || d == d2) region.push_back(v);
    }
    for (std::size_t i = 0; i < region.size(); ++i) local_[region[i]] = static_cast<int>(i);

    const std::int64_t total = graph_->total_population();
    const int n = plan_.num_districts();
    auto balanced = [&](std::int64_t p) { return relative_deviation(p, total, n) <= config_.epsilon; };

    std::optional<std::vector<Vertex>> moved;
    for (std::size_t attempt = 0; attempt < config_.max_tree_attempts && !moved; ++attempt) {
      const Tree tree = detail::spanning_tree_in(*graph_, region, local_, rng_);
      const auto rt = detail::root_tree(tree, graph_->populations());
      if (auto cut = detail::balanced_cut(rt, balanced, rng_)) moved = detail::subtree_vertices(rt, cut->second);
    }
    for (Vertex v : region) local_[v] = -1;
    if (!moved)
      throw Error(ErrorCategory::StepFailed, "no balanced cut in " + std::to_string(config_.max_tree_attempts) +
                                                 " spanning trees for districts " + std::to_string(d1 + 1) + "," +
                                                 std::to_string(d2 + 1));

    // The side holding the region's smallest vertex keeps d1.
    const bool first_in_moved = std::binary_search(moved->begin(), moved->end(), region.front());
    plan_.reassign(region, first_in_moved ? d2 : d1);
    plan_.reassign(*moved, first_in_moved ? d1 : d2);
    return {d1, d2};
  }

  /// Retries try_step with fresh merge pairs, at most max_tree_attempts times.
  std::pair<DistrictId, DistrictId> step() {
    for (std::size_t retry = 1;; ++retry) {
      try {
        return try_step();
      } catch (const Error& e) {
        if (e.category() != ErrorCategory::StepFailed || retry >= config_.max_tree_attempts) throw;
      }
    }
  }

  const Plan& plan() const noexcept { return plan_; }
  const Rng& rng() const noexcept { return rng_; }

 private:
  const DualGraph* graph_;
  Plan plan_;
  RecomConfig config_;
  Rng rng_;
  std::vector<int> local_;
};

/// Single ReCom step from `plan` drawing from the caller's stream; one merge
/// pair only, so StepFailed surfaces directly.
inline Plan recom_step(const DualGraph& graph, const Plan& plan, const RecomConfig& config, Rng& rng) {
  RecomChain chain(graph, plan, config, rng);
  chain.try_step();
  rng = chain.rng();
  return chain.plan();
}

template <typename Sink>
void run_recom(const DualGraph& graph, const Plan& initial, const RecomConfig& config, Sink&& sink) {
  RecomChain chain(graph, initial, config);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    chain.step();
    sink(step, chain.plan());
  }
}

}  // namespace nestmc
