#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tarmac/channel.hpp"
#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

enum class Protocol : std::uint8_t {
  Tarmac,
  TarmacAdaptive,
  TarmacMultipath,
  ShortestPath,
  Intrusion1,
  Intrusion2,
};

enum class PatternKind : std::uint8_t {
  AllToSink,      // every node is a source
  AllNodes,       // alias of AllToSink kept for preset naming
  OneThird,       // floor(N/3) nodes drawn uniformly by seeded draw
  CornerQuarter,  // the 5x5 (rows/2 x cols/2) corner opposite the sink
  Single,         // one configured source
};

const char* to_string(Protocol p);
const char* to_string(PatternKind k);
bool protocol_from_string(const std::string& s, Protocol& out);
bool pattern_from_string(const std::string& s, PatternKind& out);

struct RunConfig {
  Protocol protocol = Protocol::Tarmac;

  int rows = 10;
  int cols = 10;
  int spacing_m = 20;
  NodeId sink = 0;  // up-left corner

  int slot_count = 4;
  SimTime period_us = 1'000'000;  // TARMAC tau; Intrusion 1 tick; Intrusion 2 resend period
  int slot_bytes = 64;
  int frame_header_bytes = 18;
  int slot_header_bytes = 8;
  int payload_bytes = 32;
  int buffer_slots = 16;

  PatternKind pattern = PatternKind::AllToSink;
  NodeId single_source = 99;
  double rate_pps = 2.0;
  SimTime traffic_start_us = 0;
  SimTime traffic_duration_us = 100 * kSecond;
  SimTime routing_period_us = 5 * kSecond;  // 0 disables routing riders

  ChannelConfig channel;

  std::uint64_t seed = 1;
  SimTime sim_end_us = 400 * kSecond;
  std::string output_dir = "out";
  std::string trace_file;  // optional event-dispatch trace

  // Adaptive TARMAC knobs.
  SimTime tau_min_us = 250'000;
  SimTime tau_max_us = 4'000'000;
  int backlog_watermark_slots = 0;  // 0 -> 2 * slot_count
  int backlog_persist_periods = 3;
  SimTime bs_request_window_us = 10 * kSecond;
  SimTime bs_occupancy_window_us = 30 * kSecond;
  double bs_reduce_threshold = 0.25;

  // Baseline knobs.
  double fake_path_prob = 0.0;
  int retry_limit = 7;
  SimTime sifs_us = 10;

  // Energy model (microjoule per byte).
  double e_tx_uj_per_byte = 0.6;
  double e_rx_uj_per_byte = 0.3;

  // Adversary analysis defaults.
  SimTime attack_window_us = 50 * kMillisecond;
  int attack_shuffles = 20;
  int attack_edge_min_repeats = 2;

  int node_count() const { return rows * cols; }
  int watermark() const {
    return backlog_watermark_slots > 0 ? backlog_watermark_slots
                                       : 2 * slot_count;
  }
};

// Throws std::invalid_argument with a diagnostic on the first violated
// constraint.
void validate(const RunConfig& config);

// Flat key=value text, '#' comments. Unknown keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

// Canonical key=value rendering; equal configs render identically.
std::string canonical_text(const RunConfig& config);
// FNV-1a hash of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace tarmac
