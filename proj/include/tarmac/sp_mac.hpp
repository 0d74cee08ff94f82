#pragma once

#include <cstdint>
#include <deque>
#include <unordered_set>

#include "tarmac/mac_base.hpp"

namespace tarmac {

// Plain shortest-path unicast over a CSMA MAC with RTS/CTS/DATA/ACK, the
// unprotected upper-bound baseline: a clean hop costs exactly four
// transmissions.
class SpNode : public MacBase {
 public:
  static constexpr std::uint32_t kRtsBytes = 20;
  static constexpr std::uint32_t kCtsBytes = 14;
  static constexpr std::uint32_t kAckBytes = 14;
  static constexpr std::uint32_t kDataHeaderBytes = 24;
  static constexpr SimTime kSlotUs = 20;
  static constexpr SimTime kTimeoutMarginUs = 40;

  SpNode(Simulation& sim, NodeId self) : MacBase(sim, self) {}

  void start() override {}
  void on_packet_arrival(DataPacket packet) override;
  void on_receive(const Payload& payload,
                  const TransmissionRecord& record) override;
  void collect_live_packets(std::vector<std::uint32_t>& out) const override;

 private:
  enum class Phase : std::uint8_t { Idle, WaitCts, WaitAck };

  void begin_service();
  void start_attempt();
  void csma_send_rts();
  void handle_cts(const UnicastPdu& pdu);
  void handle_data(const UnicastPdu& pdu);
  void handle_ack(const UnicastPdu& pdu);
  void fail_attempt();
  void finish(bool success);
  std::uint32_t data_bytes() const;

  std::deque<DataPacket> queue_;
  Phase phase_ = Phase::Idle;
  NodeId next_hop_ = kNoNode;
  int attempt_ = 0;
  std::uint32_t exchange_counter_ = 0;
  std::uint32_t cur_exchange_ = 0;
  SimTime resp_busy_until_ = 0;  // committed CTS/ACK airtime
  std::unordered_set<std::uint32_t> seen_;
};

}  // namespace tarmac
