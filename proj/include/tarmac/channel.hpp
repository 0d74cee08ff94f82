#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

enum class RxOutcome : std::uint8_t { Received, Collided, OutOfRange };

struct ChannelConfig {
  int range_dm = 400;            // unit-disk radius (40 m)
  // Interference radius; 0 means equal to range_dm. Transmissions between
  // range and interference distance cannot be decoded but still destroy
  // overlapping receptions and show up on carrier sense.
  int interference_dm = 0;
  std::int64_t bitrate_bps = 2'000'000;
  bool csma_defer = true;
  SimTime max_jitter_us = 1000;  // post-defer backoff bound

  int effective_interference_dm() const {
    return interference_dm > 0 ? interference_dm : range_dm;
  }
};

// One physical-layer emission. The per-receiver outcome map covers every
// in-range receiver; anything else is OutOfRange. carried_pkt_ids is ground
// truth for scoring only and is never exported to the transmission log.
struct TransmissionRecord {
  std::uint32_t tx_id = 0;
  NodeId sender = 0;
  SimTime start = 0;
  SimTime duration = 0;
  std::uint32_t bytes = 0;
  std::string kind;
  std::vector<std::pair<NodeId, RxOutcome>> outcomes;  // sorted by receiver id
  std::vector<std::uint32_t> carried_pkt_ids;

  SimTime end() const { return start + duration; }
  RxOutcome outcome_for(NodeId receiver) const;
};

// Unit-disk broadcast medium with overlap-destroys-all collisions, no capture
// effect and zero propagation delay. Interference range equals transmission
// range.
class Channel {
 public:
  Channel(const Topology& topology, const ChannelConfig& config);

  const ChannelConfig& config() const { return config_; }
  std::size_t node_count() const { return neighbors_.size(); }

  std::span<const NodeId> neighbors(NodeId node) const;
  bool in_range(NodeId a, NodeId b) const;
  bool interferes(NodeId a, NodeId b) const;

  // ceil(bytes * 8 / bitrate) in microseconds.
  SimTime airtime_us(std::uint32_t bytes) const;

  // Starts a broadcast; the caller owns scheduling the matching
  // end_broadcast at start + duration. A node may not overlap its own
  // transmissions (protocol bug, throws).
  std::uint32_t begin_broadcast(NodeId sender, std::uint32_t bytes,
                                std::string kind,
                                std::vector<std::uint32_t> carried_pkt_ids,
                                SimTime at);
  void end_broadcast(std::uint32_t tx_id);

  // True iff some other node's transmission is audible at `node` at time t.
  bool carrier_busy(NodeId node, SimTime at) const;
  // True iff `node` itself is mid-transmission at time t.
  bool transmitting(NodeId node, SimTime at) const;
  // Earliest time >= at when all currently audible transmissions (and the
  // node's own, if any) have ended.
  SimTime idle_at(NodeId node, SimTime at) const;

  const std::vector<TransmissionRecord>& log() const { return log_; }
  TransmissionRecord& record(std::uint32_t tx_id) { return log_.at(tx_id); }
  std::vector<TransmissionRecord> take_log() { return std::move(log_); }

 private:
  ChannelConfig config_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::vector<NodeId>> interferers_;
  std::vector<TransmissionRecord> log_;
  std::vector<std::uint32_t> active_;  // tx_ids still on air
};

}  // namespace tarmac
