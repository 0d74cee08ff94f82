#include "tarmac/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tarmac/channel.hpp"
#include "tarmac/rng.hpp"

namespace tarmac {

std::vector<TxObservation> observations_from_records(
    const std::vector<TransmissionRecord>& records) {
  std::vector<TxObservation> out;
  out.reserve(records.size());
  for (const TransmissionRecord& rec : records) {
    TxObservation o;
    o.sender = rec.sender;
    o.start_us = rec.start;
    o.duration_us = rec.duration;
    o.bytes = rec.bytes;
    o.kind = rec.kind;
    out.push_back(std::move(o));
  }
  return out;
}

namespace {

// The attacker's own adjacency, derived from known positions and range.
std::vector<std::vector<NodeId>> adjacency(const Topology& topology,
                                           int range_dm) {
  const auto& sites = topology.sites();
  const std::int64_t range_sq = static_cast<std::int64_t>(range_dm) * range_dm;
  std::vector<std::vector<NodeId>> adj(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (i != j && range_dm > 0 &&
          Topology::distance_sq_dm(sites[i], sites[j]) <= range_sq) {
        adj[i].push_back(static_cast<NodeId>(j));
      }
    }
  }
  return adj;
}

struct NodeSeries {
  std::vector<SimTime> starts;        // own transmission starts, sorted
  std::vector<SimTime> audible_ends;  // ends of receivable transmissions, sorted
};

std::vector<NodeSeries> build_series(std::span<const TxObservation> log,
                                     const std::vector<std::vector<NodeId>>& adj) {
  std::vector<NodeSeries> series(adj.size());
  for (const TxObservation& o : log) {
    if (o.sender >= series.size()) continue;
    series[o.sender].starts.push_back(o.start_us);
    for (NodeId n : adj[o.sender]) {
      series[n].audible_ends.push_back(o.end_us());
    }
  }
  for (NodeSeries& s : series) {
    std::sort(s.starts.begin(), s.starts.end());
    std::sort(s.audible_ends.begin(), s.audible_ends.end());
  }
  return series;
}

// Mean over transmitting nodes of the fraction of sends that begin within
// [0, w] after an audible transmission ended.
double reaction_fraction(const std::vector<NodeSeries>& series, SimTime w) {
  double sum = 0.0;
  int nodes = 0;
  for (const NodeSeries& s : series) {
    if (s.starts.empty()) continue;
    ++nodes;
    std::size_t hits = 0;
    for (SimTime start : s.starts) {
      const auto lo = std::lower_bound(s.audible_ends.begin(),
                                       s.audible_ends.end(), start - w);
      const auto hi = std::upper_bound(s.audible_ends.begin(),
                                       s.audible_ends.end(), start);
      if (lo != hi) ++hits;
    }
    sum += static_cast<double>(hits) / static_cast<double>(s.starts.size());
  }
  return nodes == 0 ? 0.0 : sum / nodes;
}

}  // namespace

double score_time_correlation(std::span<const TxObservation> log,
                              const Topology& topology, int range_dm,
                              const AttackParams& params) {
  if (log.empty()) return 0.0;
  const auto adj = adjacency(topology, range_dm);
  const double raw = reaction_fraction(build_series(log, adj), params.window_us);

  SimTime lo = std::numeric_limits<SimTime>::max();
  SimTime hi = std::numeric_limits<SimTime>::min();
  for (const TxObservation& o : log) {
    lo = std::min(lo, o.start_us);
    hi = std::max(hi, o.end_us());
  }
  const SimTime span = std::max<SimTime>(1, hi - lo);

  // Null model: circularly shift each node's emissions by an independent
  // uniform offset. Per-node rates and inter-send structure survive; only
  // cross-node alignment is destroyed.
  double surrogate_sum = 0.0;
  std::vector<TxObservation> shifted(log.begin(), log.end());
  for (int round = 0; round < params.shuffles; ++round) {
    std::vector<SimTime> offset(adj.size(), 0);
    for (std::size_t n = 0; n < adj.size(); ++n) {
      RngStream rng(params.seed,
                    stream_id_for(RngPurpose::Shuffle,
                                  static_cast<std::uint32_t>(round) << 16 |
                                      static_cast<std::uint32_t>(n)));
      offset[n] = rng.uniform_int(0, span - 1);
    }
    for (std::size_t i = 0; i < log.size(); ++i) {
      const TxObservation& o = log[i];
      shifted[i].start_us =
          lo + (o.start_us - lo + offset[o.sender]) % span;
    }
    surrogate_sum +=
        reaction_fraction(build_series(shifted, adj), params.window_us);
  }
  const double surrogate = surrogate_sum / params.shuffles;
  return std::clamp(raw - surrogate, 0.0, 1.0);
}

double score_spatial_cv(std::span<const TxObservation> log,
                        std::size_t node_count, SimTime begin, SimTime end) {
  if (node_count == 0) return 0.0;
  std::vector<double> counts(node_count, 0.0);
  for (const TxObservation& o : log) {
    if (o.sender < node_count && o.start_us >= begin && o.start_us < end) {
      counts[o.sender] += 1.0;
    }
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(node_count);
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= static_cast<double>(node_count);
  return std::sqrt(var) / mean;
}

std::vector<std::pair<NodeId, NodeId>> trace_flows(
    std::span<const TxObservation> log, const Topology& topology, int range_dm,
    const AttackParams& params) {
  const auto adj = adjacency(topology, range_dm);
  std::vector<std::vector<SimTime>> starts(adj.size());
  std::vector<std::vector<SimTime>> ends(adj.size());
  for (const TxObservation& o : log) {
    if (o.sender >= adj.size()) continue;
    starts[o.sender].push_back(o.start_us);
    ends[o.sender].push_back(o.end_us());
  }
  for (auto& v : starts) std::sort(v.begin(), v.end());
  for (auto& v : ends) std::sort(v.begin(), v.end());

  std::vector<std::pair<NodeId, NodeId>> claimed;
  for (std::size_t a = 0; a < adj.size(); ++a) {
    for (NodeId b : adj[a]) {
      int repeats = 0;
      for (SimTime e : ends[a]) {
        const auto lo = std::lower_bound(starts[b].begin(), starts[b].end(), e);
        const auto hi = std::upper_bound(starts[b].begin(), starts[b].end(),
                                         e + params.window_us);
        if (lo != hi) ++repeats;
        if (repeats >= params.edge_min_repeats) break;
      }
      if (repeats >= params.edge_min_repeats) {
        claimed.emplace_back(static_cast<NodeId>(a), b);
      }
    }
  }
  return claimed;
}

double score_trace_recovery(
    const std::vector<std::pair<NodeId, NodeId>>& claimed,
    const std::vector<std::pair<NodeId, NodeId>>& truth) {
  if (truth.empty()) return 0.0;
  std::vector<std::pair<NodeId, NodeId>> sorted_claimed = claimed;
  std::sort(sorted_claimed.begin(), sorted_claimed.end());
  std::size_t hits = 0;
  for (const auto& edge : truth) {
    if (std::binary_search(sorted_claimed.begin(), sorted_claimed.end(), edge)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

AttackReport analyze(std::span<const TxObservation> log,
                     const Topology& topology, int range_dm,
                     const AttackParams& params) {
  AttackReport report;
  report.time_correlation =
      score_time_correlation(log, topology, range_dm, params);

  constexpr SimTime kMax = std::numeric_limits<SimTime>::max();
  report.spatial_cv = score_spatial_cv(log, topology.size(), 0, kMax);
  if (params.windows.empty()) {
    report.spatial_cv_per_window.push_back(report.spatial_cv);
  } else {
    for (const auto& [begin, end] : params.windows) {
      report.spatial_cv_per_window.push_back(
          score_spatial_cv(log, topology.size(), begin, end));
    }
  }

  report.claimed_edges = trace_flows(log, topology, range_dm, params);

  SimTime lo = kMax;
  SimTime hi = std::numeric_limits<SimTime>::min();
  std::vector<std::uint64_t> counts(topology.size(), 0);
  for (const TxObservation& o : log) {
    lo = std::min(lo, o.start_us);
    hi = std::max(hi, o.end_us());
    if (o.sender < counts.size()) ++counts[o.sender];
  }
  report.per_node_rate.assign(topology.size(), 0.0);
  if (!log.empty() && hi > lo) {
    const double span_s = static_cast<double>(hi - lo) / 1e6;
    for (std::size_t n = 0; n < counts.size(); ++n) {
      report.per_node_rate[n] = static_cast<double>(counts[n]) / span_s;
    }
  }
  return report;
}

}  // namespace tarmac
