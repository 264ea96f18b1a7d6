#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nestmc/error.hpp"

namespace nestmc {

// Vertices are addressed by dense index 0..size()-1; the opaque string id is
// kept for I/O. Districts are 0-based internally and written 1-based.
using Vertex = std::size_t;
using DistrictId = int;
using Edge = std::pair<Vertex, Vertex>;

enum class Party { A, B };

constexpr Party other(Party p) noexcept { return p == Party::A ? Party::B : Party::A; }

/// Two-party tallies for one contest, indexed by vertex.
struct Election {
  std::string name;
  std::vector<std::int64_t> party_a;
  std::vector<std::int64_t> party_b;

  const std::vector<std::int64_t>& votes(Party p) const { return p == Party::A ? party_a : party_b; }
};

namespace detail {

// Graph search from `start` through vertices accepted by `inside`.
// Returns the number of vertices reached.
template <typename AdjFn, typename InsideFn>
std::size_t reach_count(std::size_t n, Vertex start, AdjFn&& adjacent, InsideFn&& inside,
                        std::vector<char>& seen) {
  seen.assign(n, 0);
  std::vector<Vertex> stack{start};
  seen[start] = 1;
  std::size_t count = 0;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    ++count;
    for (Vertex w : adjacent(v)) {
      if (!seen[w] && inside(w)) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace detail

class DualGraph {
 public:
  /// Validates every structural invariant; throws Error on the first violation.
  DualGraph(std::vector<std::string> ids, std::vector<std::int64_t> population,
            std::vector<Edge> edges, std::vector<Election> elections = {})
      : ids_(std::move(ids)), population_(std::move(population)), elections_(std::move(elections)) {
    const std::size_t n = ids_.size();
    if (n == 0) throw Error(ErrorCategory::SchemaViolation, "graph has no vertices");
    if (population_.size() != n)
      throw Error(ErrorCategory::SchemaViolation, "population list length differs from vertex count");
    for (std::size_t i = 0; i < n; ++i) {
      if (!index_.emplace(ids_[i], i).second)
        throw Error(ErrorCategory::DuplicateVertex, "duplicate vertex id '" + ids_[i] + "'");
      if (population_[i] < 0)
        throw Error(ErrorCategory::NegativePopulation, "vertex '" + ids_[i] + "' has negative population");
      total_population_ += population_[i];
    }

    adjacency_.resize(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n)
        throw Error(ErrorCategory::UnknownVertex, "edge endpoint index out of range");
      if (u == v) throw Error(ErrorCategory::SelfLoop, "self-loop on vertex '" + ids_[u] + "'");
      if (u > v) std::swap(u, v);
      edges_.emplace_back(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
      throw Error(ErrorCategory::DuplicateEdge,
                  "duplicate edge '" + ids_[dup->first] + "'-'" + ids_[dup->second] + "'");
    for (auto [u, v] : edges_) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

    for (const auto& e : elections_) {
      if (e.party_a.size() != n || e.party_b.size() != n)
        throw Error(ErrorCategory::IncompleteElection, "election '" + e.name + "' does not cover every vertex");
      for (std::size_t i = 0; i < n; ++i)
        if (e.party_a[i] < 0 || e.party_b[i] < 0)
          throw Error(ErrorCategory::SchemaViolation,
                      "election '" + e.name + "' has negative votes at '" + ids_[i] + "'");
    }

    auto sizes = component_sizes();
    if (sizes.size() > 1) {
      std::string listing;
      for (std::size_t s : sizes) listing += (listing.empty() ? "" : ",") + std::to_string(s);
      throw Error(ErrorCategory::DisconnectedGraph,
                  "graph has " + std::to_string(sizes.size()) + " components of sizes [" + listing + "]");
    }
  }

  /// Builds from string-id edges, resolving each endpoint.
  static DualGraph from_id_edges(std::vector<std::string> ids, std::vector<std::int64_t> population,
                                 const std::vector<std::pair<std::string, std::string>>& id_edges,
                                 std::vector<Election> elections = {}) {
    std::unordered_map<std::string, Vertex> lookup;
    for (std::size_t i = 0; i < ids.size(); ++i) lookup.emplace(ids[i], i);
    auto resolve = [&](const std::string& id) {
      auto it = lookup.find(id);
      if (it == lookup.end()) throw Error(ErrorCategory::UnknownVertex, "edge names undeclared vertex '" + id + "'");
      return it->second;
    };
    std::vector<Edge> edges;
    edges.reserve(id_edges.size());
    for (const auto& [a, b] : id_edges) edges.emplace_back(resolve(a), resolve(b));
    return DualGraph(std::move(ids), std::move(population), std::move(edges), std::move(elections));
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(Vertex v) const { return ids_.at(v); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  std::optional<Vertex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Vertex index_of(const std::string& id) const {
    if (auto v = find(id)) return *v;
    throw Error(ErrorCategory::UnknownVertex, "unknown vertex '" + id + "'");
  }

  std::int64_t population(Vertex v) const { return population_.at(v); }
  const std::vector<std::int64_t>& populations() const noexcept { return population_; }
  std::int64_t total_population() const noexcept { return total_population_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const std::vector<Election>& elections() const noexcept { return elections_; }

  const Election& election(const std::string& name) const {
    for (const auto& e : elections_)
      if (e.name == name) return e;
    throw Error(ErrorCategory::UnknownElection, "graph has no election named '" + name + "'");
  }

 private:
  std::vector<std::size_t> component_sizes() const {
    std::vector<char> seen(size(), 0);
    std::vector<char> scratch;
    std::vector<std::size_t> sizes;
    for (Vertex s = 0; s < size(); ++s) {
      if (seen[s]) continue;
      std::size_t count = detail::reach_count(
          size(), s, [this](Vertex v) { return neighbors(v); }, [](Vertex) { return true; }, scratch);
      for (Vertex v = 0; v < size(); ++v)
        if (scratch[v]) seen[v] = 1;
      sizes.push_back(count);
    }
    return sizes;
  }

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::int64_t> population_;
  std::int64_t total_population_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Election> elections_;
};

/// Assignment of every vertex to one of num_districts() districts.
class Plan {
 public:
  Plan(std::vector<DistrictId> assignment, int num_districts)
      : assignment_(std::move(assignment)), num_districts_(num_districts) {
    if (num_districts_ < 1) throw Error(ErrorCategory::InvalidConfig, "plan needs at least one district");
    std::vector<std::size_t> count(static_cast<std::size_t>(num_districts_), 0);
    for (DistrictId d : assignment_) {
      if (d < 0 || d >= num_districts_)
        throw Error(ErrorCategory::SchemaViolation, "district id " + std::to_string(d) + " out of range");
      ++count[static_cast<std::size_t>(d)];
    }
    for (std::size_t d = 0; d < count.size(); ++d)
      if (count[d] == 0) throw Error(ErrorCategory::EmptyDistrict, "district " + std::to_string(d + 1) + " is empty");
  }

  /// Relabels arbitrary integer labels densely, preserving their numeric order.
  static Plan from_labels(const std::vector<long long>& labels) {
    std::vector<long long> distinct(labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<DistrictId> assignment;
    assignment.reserve(labels.size());
    for (long long l : labels)
      assignment.push_back(
          static_cast<DistrictId>(std::lower_bound(distinct.begin(), distinct.end(), l) - distinct.begin()));
    return Plan(std::move(assignment), static_cast<int>(distinct.size()));
  }

  std::size_t size() const noexcept { return assignment_.size(); }
  int num_districts() const noexcept { return num_districts_; }
  DistrictId district_of(Vertex v) const { return assignment_.at(v); }
  const std::vector<DistrictId>& assignment() const noexcept { return assignment_; }

  std::vector<Vertex> members(DistrictId d) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < assignment_.size(); ++v)
      if (assignment_[v] == d) out.push_back(v);
    return out;
  }

  std::vector<std::size_t> district_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(num_districts_), 0);
    for (DistrictId d : assignment_) ++sizes[static_cast<std::size_t>(d)];
    return sizes;
  }

  /// Exchanges the districts of u and v (an involution).
  void swap_assignments(Vertex u, Vertex v) { std::swap(assignment_.at(u), assignment_.at(v)); }

  /// Moves the listed vertices into district d. Callers keep districts nonempty.
  void reassign(std::span<const Vertex> vertices, DistrictId d) {
    for (Vertex v : vertices) assignment_.at(v) = d;
  }

  friend bool operator==(const Plan&, const Plan&) = default;

 private:
  std::vector<DistrictId> assignment_;
  int num_districts_;
};

/// Arity k of a k:1 nesting; k = 3 for the Ohio/Wisconsin rule.
struct NestingSpec {
  std::size_t arity = 3;

  explicit NestingSpec(std::size_t k = 3) : arity(k) {
    if (arity < 1) throw Error(ErrorCategory::InvalidConfig, "nesting arity must be at least 1");
  }
};

/// Labels renumbered by order of first appearance. Two plans describe the
/// same partition iff their canonical labels are equal.
inline std::vector<DistrictId> canonical_labels(const Plan& plan) {
  std::vector<DistrictId> remap(static_cast<std::size_t>(plan.num_districts()), -1);
  std::vector<DistrictId> out;
  out.reserve(plan.size());
  DistrictId next = 0;
  for (DistrictId d : plan.assignment()) {
    auto& r = remap[static_cast<std::size_t>(d)];
    if (r < 0) r = next++;
    out.push_back(r);
  }
  return out;
}

inline Plan canonical(const Plan& plan) { return Plan(canonical_labels(plan), plan.num_districts()); }

/// Label-independent 64-bit FNV-1a hash of the partition.
inline std::uint64_t plan_digest(const Plan& plan) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint32_t x) {
    for (int i = 0; i < 4; ++i) {
      h ^= (x >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint32_t>(plan.num_districts()));
  for (DistrictId d : canonical_labels(plan)) mix(static_cast<std::uint32_t>(d));
  return h;
}

inline std::string digest_hex(std::uint64_t digest) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, digest >>= 4) out[static_cast<std::size_t>(i)] = hex[digest & 0xf];
  return out;
}

inline void require_matching(const DualGraph& graph, const Plan& plan) {
  if (plan.size() != graph.size())
    throw Error(ErrorCategory::PlanGraphMismatch, "plan assigns " + std::to_string(plan.size()) +
                                                       " vertices but graph has " + std::to_string(graph.size()));
}

/// True iff the subgraph induced on `subset` is connected.
inline bool is_connected(const DualGraph& graph, std::span<const Vertex> subset) {
  if (subset.empty()) throw Error(ErrorCategory::InvalidSubset, "subset is empty");
  std::vector<char> member(graph.size(), 0);
  for (Vertex v : subset) {
    if (v >= graph.size()) throw Error(ErrorCategory::UnknownVertex, "vertex index " + std::to_string(v));
    member[v] = 1;
  }
  std::size_t distinct = static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
  std::vector<char> seen;
  return detail::reach_count(
             graph.size(), subset.front(), [&](Vertex v) { return graph.neighbors(v); },
             [&](Vertex w) { return member[w] != 0; }, seen) == distinct;
}

inline bool is_connected(const DualGraph& graph, std::initializer_list<Vertex> subset) {
  return is_connected(graph, std::span<const Vertex>(subset.begin(), subset.size()));
}

/// Connectivity of one district under a (possibly hypothetical) labeling.
template <typename LabelFn>
bool district_connected(const DualGraph& graph, Vertex start, std::size_t expected, DistrictId d, LabelFn&& label,
                        std::vector<char>& scratch) {
  return detail::reach_count(
             graph.size(), start, [&](Vertex v) { return graph.neighbors(v); },
             [&](Vertex w) { return label(w) == d; }, scratch) == expected;
}

inline bool is_contiguous_plan(const DualGraph& graph, const Plan& plan) {
  require_matching(graph, plan);
  const auto sizes = plan.district_sizes();
  std::vector<Vertex> first(sizes.size(), graph.size());
  for (Vertex v = graph.size(); v-- > 0;) first[static_cast<std::size_t>(plan.district_of(v))] = v;
  std::vector<char> scratch;
  auto label = [&](Vertex w) { return plan.district_of(w); };
  for (std::size_t d = 0; d < sizes.size(); ++d)
    if (!district_connected(graph, first[d], sizes[d], static_cast<DistrictId>(d), label, scratch)) return false;
  return true;
}

inline bool is_k_nested(const DualGraph& graph, const Plan& plan, const NestingSpec& spec) {
  require_matching(graph, plan);
  for (std::size_t s : plan.district_sizes())
    if (s != spec.arity) return false;
  return is_contiguous_plan(graph, plan);
}

inline std::vector<std::int64_t> district_populations(const DualGraph& graph, const Plan& plan) {
  require_matching(graph, plan);
  std::vector<std::int64_t> pops(static_cast<std::size_t>(plan.num_districts()), 0);
  for (Vertex v = 0; v < graph.size(); ++v) pops[static_cast<std::size_t>(plan.district_of(v))] += graph.population(v);
  return pops;
}

/// |pop - ideal| / ideal for one district, evaluated as |pop*n - total| / total
/// so integer populations with perfect balance give exactly zero.
inline double relative_deviation(std::int64_t pop, std::int64_t total, int n) {
  const double num = std::abs(static_cast<double>(pop) * n - static_cast<double>(total));
  return num / static_cast<double>(total);
}

/// Largest relative deviation of any district from the ideal population.
inline double population_deviation(const DualGraph& graph, const Plan& plan) {
  const auto pops = district_populations(graph, plan);
  if (graph.total_population() <= 0)
    throw Error(ErrorCategory::DegeneratePopulation, "total population is zero");
  double worst = 0.0;
  for (std::int64_t p : pops) worst = std::max(worst, relative_deviation(p, graph.total_population(), plan.num_districts()));
  return worst;
}

/// Collapses each district to a single vertex (ids "1".."n"), summing
/// population and every election's tallies.
inline DualGraph quotient_graph(const DualGraph& graph, const Plan& plan) {
  if (!is_contiguous_plan(graph, plan))
    throw Error(ErrorCategory::NotContiguous, "cannot take the quotient by a non-contiguous plan");
  const std::size_t n = static_cast<std::size_t>(plan.num_districts());
  std::vector<std::string> ids;
  for (std::size_t d = 0; d < n; ++d) ids.push_back(std::to_string(d + 1));
  auto pops = district_populations(graph, plan);

  std::vector<Edge> edges;
  for (auto [u, v] : graph.edges()) {
    auto du = static_cast<Vertex>(plan.district_of(u));
    auto dv = static_cast<Vertex>(plan.district_of(v));
    if (du != dv) edges.emplace_back(std::min(du, dv), std::max(du, dv));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Election> elections;
  for (const auto& e : graph.elections()) {
    Election q{e.name, std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
    for (Vertex v = 0; v < graph.size(); ++v) {
      auto d = static_cast<std::size_t>(plan.district_of(v));
      q.party_a[d] += e.party_a[v];
      q.party_b[d] += e.party_b[v];
    }
    elections.push_back(std::move(q));
  }
  return DualGraph(std::move(ids), std::move(pops), std::move(edges), std::move(elections));
}

/// rows x cols rook-adjacency grid, ids "1".."rows*cols" row-major, unit population.
inline DualGraph grid_graph(std::size_t rows, std::size_t cols, std::vector<Election> elections = {}) {
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const Vertex v = r * cols + c;
      ids.push_back(std::to_string(v + 1));
      if (c + 1 < cols) edges.emplace_back(v, v + 1);
      if (r + 1 < rows) edges.emplace_back(v, v + cols);
    }
  return DualGraph(std::move(ids), std::vector<std::int64_t>(rows * cols, 1), std::move(edges),
                   std::move(elections));
}

}  // namespace nestmc
