#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tarmac/channel.hpp"
#include "tarmac/config.hpp"
#include "tarmac/engine.hpp"
#include "tarmac/mac_base.hpp"
#include "tarmac/metrics.hpp"
#include "tarmac/packet.hpp"
#include "tarmac/rng.hpp"
#include "tarmac/routing.hpp"
#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"
#include "tarmac/traffic.hpp"

namespace tarmac {

struct RateEpoch {
  SimTime start = 0;
  SimTime period_us = 0;
};

struct RunResult {
  RunConfig config;
  MetricsSummary metrics;
  std::vector<TransmissionRecord> tx_log;
  // Per-node scheduled send-attempt times (the lattice, before any CSMA
  // deferral). Empty for protocols without a fixed schedule.
  std::vector<std::vector<SimTime>> attempts;
  std::vector<RateEpoch> epochs;  // always starts with {0, period_us}
  std::vector<DeliveredInfo> delivered;
  std::vector<std::uint64_t> per_node_filled;
  std::vector<std::uint64_t> per_node_slots;
  std::uint64_t flood_forwards = 0;
  std::uint64_t flood_duplicates = 0;
  std::uint64_t events_scheduled = 0;
  std::uint64_t events_dispatched = 0;
};

// (a, b) pairs where b physically transmitted a data packet right after a
// did: the ground-truth forwarding structure the adversary tries to recover.
std::vector<std::pair<NodeId, NodeId>> true_forward_edges(
    const std::vector<TransmissionRecord>& log);

// Owns one simulation run end to end: topology, channel, routing, protocol
// nodes, traffic injection, run/drain lifecycle and metrics finalization.
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);
  ~Simulation();

  RunResult run();

  // --- services used by the protocol implementations ---
  const RunConfig& config() const { return config_; }
  Engine& engine() { return engine_; }
  Channel& channel() { return *channel_; }
  const RoutingTable& routes() const { return *routes_; }
  NodeId sink() const { return config_.sink; }
  RngStream& rng(NodeId node, RngPurpose purpose);
  RouteMode route_mode() const;
  int network_diameter() const { return diameter_; }

  // Starts a broadcast and schedules its completion; receivers with a clean
  // outcome get on_receive at tx end. TARMAC data entries whose every
  // designated hop lost the frame are recorded as collision drops.
  void transmit(NodeId sender, std::uint32_t bytes, const char* kind,
                Payload payload, std::vector<std::uint32_t> carried_pkt_ids);

  bool node_transmitting(NodeId node) const;

  void deliver(DataPacket packet);
  void drop(std::uint32_t pkt_id, DropCause cause);
  bool seen_delivered(std::uint32_t pkt_id) const;

  void record_attempt(NodeId node, SimTime at);
  void record_slot_fill(NodeId node, int filled, int total);
  void record_epoch(SimTime switch_at, SimTime new_period);
  void count_flood_forward() { ++flood_forwards_; }
  void count_flood_duplicate() { ++flood_duplicates_; }

  std::uint32_t next_ctrl_uid() { return ctrl_uid_counter_++; }

  MacBase& mac(NodeId node) { return *macs_.at(node); }

 private:
  void build_nodes();
  void schedule_traffic();
  void finalize(RunResult& result);

  RunConfig config_;
  Engine engine_;
  Topology topology_;
  std::unique_ptr<Channel> channel_;
  std::unique_ptr<RoutingTable> routes_;
  std::vector<std::unique_ptr<MacBase>> macs_;
  std::map<std::uint64_t, RngStream> streams_;
  PacketLedger ledger_;
  std::vector<std::vector<SimTime>> attempts_;
  std::vector<std::uint64_t> per_node_filled_;
  std::vector<std::uint64_t> per_node_slots_;
  std::vector<RateEpoch> epochs_;
  std::uint64_t flood_forwards_ = 0;
  std::uint64_t flood_duplicates_ = 0;
  std::uint32_t ctrl_uid_counter_ = 0x8000'0000;  // disjoint from pkt ids
  std::uint32_t pkt_id_counter_ = 0;
  int diameter_ = 0;
  std::unique_ptr<std::ofstream> trace_out_;
};

}  // namespace tarmac
