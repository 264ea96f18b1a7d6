#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"

namespace nestmc {

struct DistrictVotes {
  std::int64_t a = 0;
  std::int64_t b = 0;

  std::int64_t of(Party p) const noexcept { return p == Party::A ? a : b; }
  std::int64_t total() const noexcept { return a + b; }

  friend bool operator==(const DistrictVotes&, const DistrictVotes&) = default;
};

using DistrictTally = std::vector<DistrictVotes>;

inline DistrictTally tally(const DualGraph& graph, const Plan& plan, const Election& election) {
  require_matching(graph, plan);
  if (election.party_a.size() != graph.size() || election.party_b.size() != graph.size())
    throw Error(ErrorCategory::IncompleteElection, "election '" + election.name + "' does not cover every vertex");
  DistrictTally out(static_cast<std::size_t>(plan.num_districts()));
  for (Vertex v = 0; v < graph.size(); ++v) {
    auto& d = out[static_cast<std::size_t>(plan.district_of(v))];
    d.a += election.party_a[v];
    d.b += election.party_b[v];
  }
  return out;
}

/// Districts where `party` strictly outpolls the other; ties go to neither.
inline int seats_won(const DistrictTally& tally, Party party) {
  return static_cast<int>(std::count_if(tally.begin(), tally.end(), [party](const DistrictVotes& d) {
    return d.of(party) > d.of(other(party));
  }));
}

/// Per-district two-party share for `party`, sorted ascending.
inline std::vector<double> ranked_shares(const DistrictTally& tally, Party party) {
  std::vector<double> shares;
  shares.reserve(tally.size());
  for (std::size_t i = 0; i < tally.size(); ++i) {
    const auto& d = tally[i];
    if (d.total() <= 0)
      throw Error(ErrorCategory::ZeroVoteDistrict, "district " + std::to_string(i + 1) + " has no two-party votes");
    shares.push_back(static_cast<double>(d.of(party)) / static_cast<double>(d.total()));
  }
  std::sort(shares.begin(), shares.end());
  return shares;
}

inline double statewide_share(const DualGraph& graph, const Election& election, Party party) {
  if (election.party_a.size() != graph.size() || election.party_b.size() != graph.size())
    throw Error(ErrorCategory::IncompleteElection, "election '" + election.name + "' does not cover every vertex");
  DistrictVotes total;
  for (Vertex v = 0; v < graph.size(); ++v) {
    total.a += election.party_a[v];
    total.b += election.party_b[v];
  }
  if (total.total() <= 0)
    throw Error(ErrorCategory::DegenerateElection, "election '" + election.name + "' has no two-party votes");
  return static_cast<double>(total.of(party)) / static_cast<double>(total.total());
}

}  // namespace nestmc
