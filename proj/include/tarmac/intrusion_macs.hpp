#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_set>

#include "tarmac/mac_base.hpp"

namespace tarmac {

// Fixed-interval forwarding with dummy cover traffic: every node transmits
// exactly once per period whether or not it has data, keeps resending its
// head-of-line packet until it overhears the parent forwarding it, and the
// sink beacons recently delivered ids so last-hop senders can release.
class Intrusion1Node : public MacBase {
 public:
  Intrusion1Node(Simulation& sim, NodeId self) : MacBase(sim, self) {}

  void start() override;
  void on_packet_arrival(DataPacket packet) override;
  void on_receive(const Payload& payload,
                  const TransmissionRecord& record) override;
  void collect_live_packets(std::vector<std::uint32_t>& out) const override;

 private:
  void tick(SimTime at);
  void csma_step();
  void emit();
  std::uint32_t wire_bytes() const;

  NodeId parent_ = kNoNode;
  std::deque<DataPacket> buffer_;
  std::optional<std::uint32_t> awaiting_;
  std::unordered_set<std::uint32_t> seen_;
  std::vector<std::uint32_t> pending_release_;  // sink only
};

// Single-held-packet randomized forwarding: a node holds at most one packet,
// resends it at a fixed period toward a randomly chosen closer neighbor
// until it overhears that neighbor forwarding it, and drops anything that
// arrives while the hold slot is occupied.
class Intrusion2Node : public MacBase {
 public:
  Intrusion2Node(Simulation& sim, NodeId self) : MacBase(sim, self) {}

  void start() override {}
  void on_packet_arrival(DataPacket packet) override;
  void on_receive(const Payload& payload,
                  const TransmissionRecord& record) override;
  void collect_live_packets(std::vector<std::uint32_t>& out) const override;

 private:
  void accept(DataPacket packet, bool forwarded);
  void send_held(std::uint32_t gen);
  void schedule_resend(std::uint32_t gen);
  void schedule_release_beacon();
  std::uint32_t wire_bytes() const;

  std::optional<DataPacket> held_;
  NodeId held_next_ = kNoNode;
  std::uint32_t hold_gen_ = 0;
  std::unordered_set<std::uint32_t> seen_;
  std::vector<std::uint32_t> pending_release_;  // sink only
  bool beacon_pending_ = false;
};

}  // namespace tarmac
