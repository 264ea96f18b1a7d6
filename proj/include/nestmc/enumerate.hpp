#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <vector>

#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/swap.hpp"

namespace nestmc {

struct EnumerationLimits {
  std::size_t max_vertices = 40;
};

namespace detail {

// Pruned depth-first enumeration of partitions into `districts` connected
// parts of exactly `part_size` vertices. Part d always takes the smallest
// unassigned vertex, so every partition is produced once, already in
// first-appearance (canonical) labeling.
class PartitionEnumerator {
 public:
  using Visit = std::function<void(const std::vector<DistrictId>&)>;

  PartitionEnumerator(const DualGraph& graph, int districts, std::size_t part_size, Visit visit)
      : graph_(graph),
        districts_(districts),
        part_size_(part_size),
        visit_(std::move(visit)),
        assign_(graph.size(), -1),
        marks_(static_cast<std::size_t>(std::max(districts, 0)), std::vector<Mark>(graph.size(), Free)) {}

  void run() { place(0); }

 private:
  enum Mark : unsigned char { Free, InSet, Frontier, Banned };

  void place(DistrictId d) {
    auto root_it = std::find(assign_.begin(), assign_.end(), -1);
    if (d == districts_) {
      if (root_it == assign_.end()) visit_(assign_);
      return;
    }
    const Vertex root = static_cast<Vertex>(root_it - assign_.begin());
    if (d + 1 == districts_) {
      // The remainder has exactly part_size vertices; it must be connected.
      std::vector<Vertex> rest;
      for (Vertex v = root; v < assign_.size(); ++v)
        if (assign_[v] < 0) rest.push_back(v);
      if (!is_connected(graph_, rest)) return;
      for (Vertex v : rest) assign_[v] = d;
      visit_(assign_);
      for (Vertex v : rest) assign_[v] = -1;
      return;
    }

    auto& mark = marks_[static_cast<std::size_t>(d)];
    std::vector<Vertex> set{root};
    mark[root] = InSet;
    std::vector<Vertex> frontier;
    extend_frontier(mark, root, frontier);
    grow(d, set, frontier);
    for (Vertex v : frontier) mark[v] = Free;
    mark[root] = Free;
  }

  void extend_frontier(std::vector<Mark>& mark, Vertex w, std::vector<Vertex>& frontier) {
    for (Vertex nb : graph_.neighbors(w))
      if (assign_[nb] < 0 && mark[nb] == Free) {
        mark[nb] = Frontier;
        frontier.push_back(nb);
      }
  }

  // Every connected set containing `set` and drawn from set ∪ frontier ∪
  // (vertices reachable through the frontier), each exactly once.
  void grow(DistrictId d, std::vector<Vertex>& set, std::vector<Vertex> frontier) {
    if (set.size() == part_size_) {
      commit(d, set);
      return;
    }
    auto& mark = marks_[static_cast<std::size_t>(d)];
    std::vector<Vertex> banned;
    while (!frontier.empty()) {
      const Vertex w = frontier.back();
      frontier.pop_back();
      set.push_back(w);
      mark[w] = InSet;
      std::vector<Vertex> next = frontier;
      const std::size_t inherited = next.size();
      extend_frontier(mark, w, next);
      grow(d, set, next);
      for (std::size_t i = inherited; i < next.size(); ++i) mark[next[i]] = Free;
      set.pop_back();
      mark[w] = Banned;
      banned.push_back(w);
    }
    for (Vertex b : banned) mark[b] = Frontier;
  }

  void commit(DistrictId d, const std::vector<Vertex>& set) {
    for (Vertex v : set) assign_[v] = d;
    if (remainder_divisible()) place(d + 1);
    for (Vertex v : set) assign_[v] = -1;
  }

  // Each connected component of the unassigned vertices must split evenly.
  bool remainder_divisible() {
    seen_.assign(assign_.size(), 0);
    for (Vertex s = 0; s < assign_.size(); ++s) {
      if (assign_[s] >= 0 || seen_[s]) continue;
      std::size_t count = 0;
      stack_.assign(1, s);
      seen_[s] = 1;
      while (!stack_.empty()) {
        Vertex v = stack_.back();
        stack_.pop_back();
        ++count;
        for (Vertex w : graph_.neighbors(v))
          if (assign_[w] < 0 && !seen_[w]) {
            seen_[w] = 1;
            stack_.push_back(w);
          }
      }
      if (count % part_size_ != 0) return false;
    }
    return true;
  }

  const DualGraph& graph_;
  int districts_;
  std::size_t part_size_;
  Visit visit_;
  std::vector<DistrictId> assign_;
  std::vector<std::vector<Mark>> marks_;  // one layer per district depth
  std::vector<char> seen_;
  std::vector<Vertex> stack_;
};

inline void check_balanced_request(const DualGraph& graph, int num_districts, std::size_t size,
                                   const EnumerationLimits& limits) {
  if (graph.size() > limits.max_vertices)
    throw Error(ErrorCategory::TooLarge, "graph has " + std::to_string(graph.size()) + " vertices; limit is " +
                                             std::to_string(limits.max_vertices));
  if (num_districts < 1 || size < 1 || static_cast<std::size_t>(num_districts) * size != graph.size())
    throw Error(ErrorCategory::NoPartitionExists, std::to_string(num_districts) + " districts of " +
                                                      std::to_string(size) + " cannot cover " +
                                                      std::to_string(graph.size()) + " vertices");
}

}  // namespace detail

/// Calls visit(labels) for every partition into num_districts connected
/// districts of exactly `size` vertices. Labels are canonical.
template <typename Visit>
void for_each_balanced_partition(const DualGraph& graph, int num_districts, std::size_t size, Visit&& visit,
                                 const EnumerationLimits& limits = {}) {
  detail::check_balanced_request(graph, num_districts, size, limits);
  detail::PartitionEnumerator(graph, num_districts, size, std::forward<Visit>(visit)).run();
}

inline std::uint64_t count_balanced_partitions(const DualGraph& graph, int num_districts, std::size_t size,
                                               const EnumerationLimits& limits = {}) {
  std::uint64_t count = 0;
  for_each_balanced_partition(graph, num_districts, size, [&](const std::vector<DistrictId>&) { ++count; }, limits);
  return count;
}

/// All partitions into num_districts contiguous districts of exactly `size`
/// vertices, canonical and sorted.
inline std::vector<Plan> enumerate_balanced_partitions(const DualGraph& graph, int num_districts, std::size_t size,
                                                       const EnumerationLimits& limits = {}) {
  std::vector<Plan> plans;
  for_each_balanced_partition(
      graph, num_districts, size, [&](const std::vector<DistrictId>& labels) { plans.emplace_back(labels, num_districts); },
      limits);
  std::sort(plans.begin(), plans.end(),
            [](const Plan& a, const Plan& b) { return a.assignment() < b.assignment(); });
  return plans;
}

/// Every k:1 nesting of the graph. Default size guard is 30 vertices.
inline std::vector<Plan> enumerate_nestings(const DualGraph& graph, const NestingSpec& spec,
                                            const EnumerationLimits& limits = {30}) {
  if (graph.size() > limits.max_vertices)
    throw Error(ErrorCategory::TooLarge, "graph has " + std::to_string(graph.size()) + " vertices; limit is " +
                                             std::to_string(limits.max_vertices));
  if (graph.size() % spec.arity != 0)
    throw Error(ErrorCategory::NoNestingExists, std::to_string(graph.size()) + " vertices are not divisible by " +
                                                    std::to_string(spec.arity));
  return enumerate_balanced_partitions(graph, static_cast<int>(graph.size() / spec.arity), spec.arity, limits);
}

/// Closure of `start` under valid, non-trivial Swap moves (breadth-first).
inline std::vector<Plan> swap_reachability(const DualGraph& graph, const NestingSpec& spec, const Plan& start,
                                           const EnumerationLimits& limits = {30}) {
  if (graph.size() > limits.max_vertices)
    throw Error(ErrorCategory::TooLarge, "graph has " + std::to_string(graph.size()) + " vertices; limit is " +
                                             std::to_string(limits.max_vertices));
  require_matching(graph, start);
  if (!is_k_nested(graph, start, spec))
    throw Error(ErrorCategory::InvalidSeed, "start plan is not " + std::to_string(spec.arity) + ":1 nested");

  std::set<std::vector<DistrictId>> seen{canonical_labels(start)};
  std::deque<Plan> queue{canonical(start)};
  while (!queue.empty()) {
    Plan plan = std::move(queue.front());
    queue.pop_front();
    for (Vertex u = 0; u < graph.size(); ++u)
      for (Vertex v = u + 1; v < graph.size(); ++v) {
        if (plan.district_of(u) == plan.district_of(v) || !is_valid_swap(graph, plan, u, v)) continue;
        Plan next = plan;
        next.swap_assignments(u, v);
        auto labels = canonical_labels(next);
        if (seen.insert(labels).second) queue.emplace_back(std::move(labels), plan.num_districts());
      }
  }
  std::vector<Plan> out;
  for (const auto& labels : seen) out.emplace_back(labels, start.num_districts());
  return out;
}

}  // namespace nestmc
