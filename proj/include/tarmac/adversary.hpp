#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

struct TransmissionRecord;

// Exactly what the transmission log exposes: sender, timing, size, protocol
// kind. No payloads, no occupancy, no queue state, no reception outcomes --
// the analysis below can only ever use what a passive observer gets.
struct TxObservation {
  NodeId sender = 0;
  SimTime start_us = 0;
  SimTime duration_us = 0;
  std::uint32_t bytes = 0;
  std::string kind;

  SimTime end_us() const { return start_us + duration_us; }
};

// Narrowing copy of the simulator's records down to observable fields.
std::vector<TxObservation> observations_from_records(
    const std::vector<TransmissionRecord>& records);

struct AttackParams {
  SimTime window_us = 50 * kMillisecond;
  int shuffles = 20;
  int edge_min_repeats = 2;
  std::uint64_t seed = 1;
  // Half-open [start, end) analysis windows, e.g. rate epochs. Empty means
  // one window covering everything.
  std::vector<std::pair<SimTime, SimTime>> windows;
};

struct AttackReport {
  double time_correlation = 0.0;
  double spatial_cv = 0.0;
  std::vector<double> spatial_cv_per_window;
  std::vector<std::pair<NodeId, NodeId>> claimed_edges;
  std::optional<double> trace_recovery;  // needs withheld ground truth
  std::vector<double> per_node_rate;     // transmissions per second
};

// Fraction of a node's transmissions that begin within the window after the
// node could have received another transmission, averaged over transmitting
// nodes, minus the same statistic on time-shuffled surrogate logs (mean of
// `shuffles` rounds), clamped to [0, 1]. Zero means the timing pattern is
// indistinguishable from its own schedule noise.
double score_time_correlation(std::span<const TxObservation> log,
                              const Topology& topology, int range_dm,
                              const AttackParams& params);

// Coefficient of variation (population stddev / mean) of per-node
// transmission counts with start times inside [begin, end).
double score_spatial_cv(std::span<const TxObservation> log,
                        std::size_t node_count, SimTime begin, SimTime end);

// Claims edge (a -> b) when b starts transmitting within the window after an
// emission of a ended, at least `edge_min_repeats` times.
std::vector<std::pair<NodeId, NodeId>> trace_flows(
    std::span<const TxObservation> log, const Topology& topology, int range_dm,
    const AttackParams& params);

// |claimed ∩ truth| / |truth|; 0 when truth is empty.
double score_trace_recovery(
    const std::vector<std::pair<NodeId, NodeId>>& claimed,
    const std::vector<std::pair<NodeId, NodeId>>& truth);

AttackReport analyze(std::span<const TxObservation> log,
                     const Topology& topology, int range_dm,
                     const AttackParams& params);

}  // namespace tarmac
