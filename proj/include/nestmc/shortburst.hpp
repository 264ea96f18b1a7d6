#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nestmc/election.hpp"
#include "nestmc/graph.hpp"
#include "nestmc/recom.hpp"

namespace nestmc {

struct BurstConfig {
  std::size_t burst_length = 10;
  std::size_t num_bursts = 0;
  Party target_party = Party::A;
  std::string election;
  RecomConfig inner;

  void validate() const {
    if (burst_length < 1) throw Error(ErrorCategory::InvalidConfig, "burst_length must be at least 1");
  }
};

struct BurstResult {
  Plan best_plan;
  std::vector<int> best_score_trace;  // running max after each burst
};

inline int score(const DualGraph& graph, const Plan& plan, const Election& election, Party party) {
  return seats_won(tally(graph, plan, election), party);
}

/// Short-burst hill climbing over ReCom: each burst of burst_length steps
/// restarts from the best plan seen so far. A later plan replaces the best
/// only with a strictly higher score, so ties keep the earliest.
inline BurstResult run_short_bursts(const DualGraph& graph, const Plan& initial, const BurstConfig& config) {
  config.validate();
  const Election& election = graph.election(config.election);
  // Validates the seed against the inner chain before any work.
  RecomChain probe(graph, initial, config.inner);

  BurstResult result{initial, {}};
  int best = score(graph, initial, election, config.target_party);
  Rng rng(config.inner.rng_seed);
  for (std::size_t burst = 0; burst < config.num_bursts; ++burst) {
    RecomChain chain(graph, result.best_plan, config.inner, rng);
    Plan burst_best = result.best_plan;
    int burst_score = best;
    for (std::size_t s = 0; s < config.burst_length; ++s) {
      chain.step();
      const int sc = score(graph, chain.plan(), election, config.target_party);
      if (sc > burst_score) {
        burst_score = sc;
        burst_best = chain.plan();
      }
    }
    rng = chain.rng();
    if (burst_score > best) {
      best = burst_score;
      result.best_plan = std::move(burst_best);
    }
    result.best_score_trace.push_back(best);
  }
  return result;
}

}  // namespace nestmc
