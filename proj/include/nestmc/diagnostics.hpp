#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nestmc/election.hpp"
#include "nestmc/error.hpp"
#include "nestmc/graph.hpp"

namespace nestmc {

/// Per-step ensemble statistics for party A.
struct EnsembleRecord {
  std::size_t step = 0;
  int seats_a = 0;
  std::vector<double> ranked_shares_a;
  std::uint64_t plan_digest = 0;

  friend bool operator==(const EnsembleRecord&, const EnsembleRecord&) = default;
};

inline EnsembleRecord make_record(const DualGraph& graph, const Plan& plan, const Election& election,
                                  std::size_t step) {
  const auto t = tally(graph, plan, election);
  return {step, seats_won(t, Party::A), ranked_shares(t, Party::A), plan_digest(plan)};
}

/// Pearson correlation of x[0..m-lag) with x[lag..m).
///
/// Each window is centred on its own mean (the two-sample form), not on the
/// global mean used by the stationary autocorrelation estimator.
inline double autocorrelation(std::span<const double> series, std::size_t lag) {
  if (series.size() < lag + 2)
    throw Error(ErrorCategory::SeriesTooShort,
                "series of length " + std::to_string(series.size()) + " is too short for lag " + std::to_string(lag));
  const std::size_t m = series.size() - lag;
  auto head = series.first(m);
  auto tail = series.subspan(lag, m);
  double mean_h = 0.0, mean_t = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_h += head[i];
    mean_t += tail[i];
  }
  mean_h /= static_cast<double>(m);
  mean_t /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = head[i] - mean_h;
    const double dy = tail[i] - mean_t;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCategory::DegenerateSeries, "series has zero variance at lag " + std::to_string(lag));
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline std::vector<double> autocorrelation_curve(std::span<const double> series, std::size_t max_lag) {
  std::vector<double> curve;
  curve.reserve(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) curve.push_back(autocorrelation(series, lag));
  return curve;
}

struct RankSummary {
  double min, q1, median, q3, max;
};

struct PartialEnsembleStats {
  double fraction;
  std::size_t records;            // prefix length ceil(fraction * m)
  std::vector<RankSummary> ranks;  // one per district rank
};

namespace detail {

// Linear interpolation between order statistics (R type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline std::size_t prefix_length(double fraction, std::size_t m) {
  const double exact = fraction * static_cast<double>(m);
  const double nearest = std::round(exact);
  // Absorb rounding noise such as 0.7 * 10 = 7.000000000000001.
  const double count = std::abs(exact - nearest) < 1e-9 * std::max(1.0, exact) ? nearest : std::ceil(exact);
  return std::clamp<std::size_t>(static_cast<std::size_t>(count), 1, m);
}

}  // namespace detail

/// Min, quartiles and max of each rank's vote share over the first
/// ceil(f * m) records, for each fraction f.
inline std::vector<PartialEnsembleStats> partial_ensemble_rank_stats(std::span<const EnsembleRecord> records,
                                                                     std::span<const double> fractions) {
  if (records.empty()) throw Error(ErrorCategory::EmptyEnsemble, "no records");
  const std::size_t ranks = records.front().ranked_shares_a.size();
  for (const auto& r : records)
    if (r.ranked_shares_a.size() != ranks)
      throw Error(ErrorCategory::SchemaViolation, "records disagree on the number of districts");
  std::vector<PartialEnsembleStats> out;
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw Error(ErrorCategory::InvalidConfig, "fractions must lie in (0, 1]");
    const std::size_t count = detail::prefix_length(f, records.size());
    PartialEnsembleStats stats{f, count, {}};
    std::vector<double> column(count);
    for (std::size_t k = 0; k < ranks; ++k) {
      for (std::size_t i = 0; i < count; ++i) column[i] = records[i].ranked_shares_a[k];
      std::sort(column.begin(), column.end());
      stats.ranks.push_back({column.front(), detail::quantile_sorted(column, 0.25),
                             detail::quantile_sorted(column, 0.5), detail::quantile_sorted(column, 0.75),
                             column.back()});
    }
    out.push_back(std::move(stats));
  }
  return out;
}

using Histogram = std::map<int, std::size_t>;

inline Histogram seat_histogram(std::span<const EnsembleRecord> records) {
  if (records.empty()) throw Error(ErrorCategory::EmptyEnsemble, "no records");
  Histogram h;
  for (const auto& r : records) ++h[r.seats_a];
  return h;
}

inline Histogram seat_histogram(std::span<const int> seats) {
  if (seats.empty()) throw Error(ErrorCategory::EmptyEnsemble, "no records");
  Histogram h;
  for (int s : seats) ++h[s];
  return h;
}

/// Total variation distance between the normalized histograms.
inline double histogram_distance(const Histogram& h1, const Histogram& h2) {
  auto total = [](const Histogram& h) {
    std::size_t t = 0;
    for (const auto& [k, c] : h) t += c;
    return t;
  };
  const std::size_t t1 = total(h1), t2 = total(h2);
  if (t1 == 0 || t2 == 0) throw Error(ErrorCategory::EmptyEnsemble, "histogram is empty");
  double l1 = 0.0;
  auto p = [](const Histogram& h, int key, std::size_t t) {
    auto it = h.find(key);
    return it == h.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(t);
  };
  for (const auto& [k, c] : h1) l1 += std::abs(p(h1, k, t1) - p(h2, k, t2));
  for (const auto& [k, c] : h2)
    if (!h1.contains(k)) l1 += p(h2, k, t2);
  return std::min(1.0, 0.5 * l1);
}

}  // namespace nestmc
