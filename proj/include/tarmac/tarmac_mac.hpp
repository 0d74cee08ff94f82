#pragma once

#include <cstdint>
#include <deque>
#include <unordered_set>

#include "tarmac/mac_base.hpp"
#include "tarmac/packet.hpp"

namespace tarmac {

// Sampled once per period; fires after `needed` consecutive samples above
// `threshold`, then re-arms. Hysteresis keeps transient spikes from
// triggering rate requests.
class RateTrigger {
 public:
  RateTrigger(int threshold, int needed) : threshold_(threshold), needed_(needed) {}
  bool sample(int backlog) {
    if (backlog > threshold_) {
      if (++streak_ >= needed_) {
        streak_ = 0;
        return true;
      }
    } else {
      streak_ = 0;
    }
    return false;
  }

 private:
  int threshold_;
  int needed_;
  int streak_ = 0;
};

// Schedule-driven TARMAC node. Frames leave on the lattice {phase + k*tau}
// whatever the queue holds; CSMA deferral reacts to channel state only, so
// the emission pattern carries no information about traffic.
class TarmacNode : public MacBase {
 public:
  TarmacNode(Simulation& sim, NodeId self, bool adaptive);

  void start() override;
  void on_packet_arrival(DataPacket packet) override;
  void on_receive(const Payload& payload,
                  const TransmissionRecord& record) override;
  void collect_live_packets(std::vector<std::uint32_t>& out) const override;

  const Schedule& schedule() const { return sched_; }
  std::size_t queue_len() const { return queue_.size(); }

 private:
  void schedule_lattice_send(SimTime at);
  void handle_lattice_send(SimTime at, std::uint32_t gen);
  void csma_step();
  void do_transmit();
  void enqueue_entry(SlotEntry entry, bool front);
  void maybe_request_rate_increase();
  void handle_flood(const SlotEntry& entry);
  void apply_switch(SimTime new_period);

  // Base-station duties (sink node, adaptive mode only).
  void bs_handle_request(const RateRequestInfo& request);
  void bs_occupancy_tick();
  void bs_issue_flood(SimTime new_period);

  Schedule sched_;
  std::deque<SlotEntry> queue_;
  std::uint32_t frame_seq_ = 0;
  std::uint32_t sched_gen_ = 0;
  SimTime last_attempt_ = -1;
  bool adaptive_ = false;
  RateTrigger trigger_;
  std::unordered_set<std::uint32_t> seen_uids_;
  std::unordered_set<std::uint32_t> seen_floods_;
  struct PendingSwitch {
    std::uint32_t flood_id = 0;
    SimTime new_period_us = 0;
    SimTime switch_at = 0;
  };
  PendingSwitch pending_switch_;
  bool has_pending_switch_ = false;

  // Base-station state.
  std::uint32_t flood_counter_ = 0;
  SimTime bs_settle_until_ = -1;
  std::int64_t bs_last_request_window_ = -1;
  std::uint16_t bs_window_max_occ_permille_ = 0;
};

}  // namespace tarmac
