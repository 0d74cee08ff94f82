#include "tarmac/tarmac_mac.hpp"

#include <algorithm>

#include "tarmac/simulation.hpp"

namespace tarmac {

namespace {
constexpr const char* kFrameKind = "tarmac_frame";
}

TarmacNode::TarmacNode(Simulation& sim, NodeId self, bool adaptive)
    : MacBase(sim, self),
      adaptive_(adaptive),
      trigger_(sim.config().watermark(), sim.config().backlog_persist_periods) {
  const RunConfig& c = sim.config();
  sched_.period_us = c.period_us;
  sched_.slot_count = c.slot_count;
  sched_.slot_bytes = c.slot_bytes;
}

void TarmacNode::start() {
  const RunConfig& c = sim_.config();
  // Phase drawn once from a traffic-independent stream.
  sched_.phase_us =
      sim_.rng(self_, RngPurpose::Phase).uniform_int(0, sched_.period_us - 1);
  schedule_lattice_send(sched_.phase_us);

  if (c.routing_period_us > 0) {
    // Routing-protocol beacon rider: one slot entry per routing period. Route
    // computation itself is static; the rider models the protocol's channel
    // footprint (occupancy and bytes).
    const auto tick = [this](SimTime at, auto&& self_ref) -> void {
      SlotEntry beacon;
      beacon.kind = EntryKind::RoutingBeacon;
      beacon.uid = sim_.next_ctrl_uid();
      beacon.designated_next_hops = {kBroadcast};
      enqueue_entry(std::move(beacon), false);
      const SimTime next = at + sim_.config().routing_period_us;
      if (next <= sim_.config().sim_end_us) {
        sim_.engine().schedule(next, EventKind::Timer, self_,
                               [this, next, self_ref]() { self_ref(next, self_ref); });
      }
    };
    sim_.engine().schedule(0, EventKind::Timer, self_,
                           [tick]() { tick(0, tick); });
  }

  if (adaptive_ && self_ == sim_.sink()) {
    const SimTime window = c.bs_occupancy_window_us;
    const auto tick = [this](SimTime at, auto&& self_ref) -> void {
      bs_occupancy_tick();
      const SimTime next = at + sim_.config().bs_occupancy_window_us;
      if (next <= sim_.config().sim_end_us) {
        sim_.engine().schedule(next, EventKind::Timer, self_,
                               [this, next, self_ref]() { self_ref(next, self_ref); });
      }
    };
    if (window <= c.sim_end_us) {
      sim_.engine().schedule(window, EventKind::Timer, self_,
                             [this, window, tick]() { tick(window, tick); });
    }
  }
}

void TarmacNode::schedule_lattice_send(SimTime at) {
  if (at > sim_.config().sim_end_us) return;
  const std::uint32_t gen = sched_gen_;
  sim_.engine().schedule(at, EventKind::ScheduledSend, self_,
                         [this, at, gen]() { handle_lattice_send(at, gen); });
}

void TarmacNode::handle_lattice_send(SimTime at, std::uint32_t gen) {
  if (gen != sched_gen_) return;  // superseded by a rate switch
  last_attempt_ = at;
  sim_.record_attempt(self_, at);

  if (adaptive_) maybe_request_rate_increase();

  schedule_lattice_send(at + sched_.period_us);
  csma_step();
}

void TarmacNode::csma_step() {
  const Channel& ch = sim_.channel();
  const SimTime now = sim_.engine().now();
  const bool busy = ch.transmitting(self_, now) ||
                    (ch.config().csma_defer && ch.carrier_busy(self_, now));
  if (!busy) {
    do_transmit();
    return;
  }
  const SimTime jitter =
      ch.config().max_jitter_us > 0
          ? sim_.rng(self_, RngPurpose::Jitter)
                .uniform_int(0, ch.config().max_jitter_us)
          : 0;
  const SimTime retry_at = ch.idle_at(self_, now) + jitter;
  sim_.engine().schedule(retry_at, EventKind::RetrySend, self_,
                         [this]() { csma_step(); });
}

void TarmacNode::do_transmit() {
  TarmacFrame frame = pack_frame(queue_, sched_, self_, frame_seq_++,
                                 sim_.config().frame_header_bytes);
  sim_.record_slot_fill(self_, frame.filled(), sched_.slot_count);
  std::vector<std::uint32_t> carried;
  for (const auto& slot : frame.slots) {
    if (slot.has_value() && slot->kind == EntryKind::Data) {
      carried.push_back(slot->packet.pkt_id);
    }
  }
  const std::uint32_t bytes = frame.wire_bytes();
  sim_.transmit(self_, bytes, kFrameKind, Payload(std::move(frame)),
                std::move(carried));
}

void TarmacNode::enqueue_entry(SlotEntry entry, bool front) {
  if (queue_.size() >= static_cast<std::size_t>(sim_.config().buffer_slots)) {
    if (entry.kind == EntryKind::Data) {
      sim_.drop(entry.packet.pkt_id, DropCause::QueueOverflow);
    }
    return;
  }
  const std::uint16_t occ = static_cast<std::uint16_t>(
      ((queue_.size() + 1) * 1000) / sim_.config().buffer_slots);
  entry.max_queue_occ_permille = std::max(entry.max_queue_occ_permille, occ);
  if (front) {
    queue_.push_front(std::move(entry));
  } else {
    queue_.push_back(std::move(entry));
  }
}

void TarmacNode::on_packet_arrival(DataPacket packet) {
  SlotEntry entry;
  entry.kind = EntryKind::Data;
  entry.uid = packet.pkt_id;
  entry.slot_header_bytes =
      static_cast<std::uint16_t>(sim_.config().slot_header_bytes);
  entry.designated_next_hops =
      sim_.routes().next_hops(self_, packet.dst, sim_.route_mode(), packet.pkt_id);
  if (entry.designated_next_hops.empty()) {
    sim_.drop(packet.pkt_id, DropCause::NoRoute);
    return;
  }
  seen_uids_.insert(packet.pkt_id);
  entry.packet = std::move(packet);
  enqueue_entry(std::move(entry), false);
}

void TarmacNode::on_receive(const Payload& payload,
                            const TransmissionRecord& record) {
  (void)record;
  const TarmacFrame* frame = std::get_if<TarmacFrame>(&payload);
  if (frame == nullptr) return;  // foreign protocol traffic
  UnpackResult unpacked = unpack_frame(*frame, self_);

  for (SlotEntry& entry : unpacked.delivered) {
    if (entry.kind == EntryKind::Data) {
      entry.packet.hop_trail.push_back(self_);
      sim_.deliver(std::move(entry.packet));
    } else if (entry.kind == EntryKind::RateRequest && adaptive_ &&
               self_ == sim_.sink()) {
      bs_window_max_occ_permille_ =
          std::max(bs_window_max_occ_permille_, entry.max_queue_occ_permille);
      bs_handle_request(entry.request);
    }
  }

  for (SlotEntry& entry : unpacked.to_forward) {
    if (seen_uids_.count(entry.uid) != 0) continue;  // duplicate copy
    seen_uids_.insert(entry.uid);
    const NodeId dst = entry.dst();
    entry.designated_next_hops =
        sim_.routes().next_hops(self_, dst, sim_.route_mode(), entry.uid);
    if (entry.designated_next_hops.empty()) {
      if (entry.kind == EntryKind::Data) {
        sim_.drop(entry.packet.pkt_id, DropCause::NoRoute);
      }
      continue;
    }
    if (entry.kind == EntryKind::Data) {
      entry.packet.hop_trail.push_back(self_);
    }
    if (adaptive_ && self_ == sim_.sink()) {
      bs_window_max_occ_permille_ =
          std::max(bs_window_max_occ_permille_, entry.max_queue_occ_permille);
    }
    enqueue_entry(std::move(entry), false);
  }

  for (const SlotEntry& entry : unpacked.broadcast) {
    if (entry.kind == EntryKind::RateFlood) handle_flood(entry);
    // Routing beacons are consumed on reception.
  }
}

void TarmacNode::maybe_request_rate_increase() {
  if (!trigger_.sample(static_cast<int>(queue_.size()))) return;
  RateRequestInfo info;
  info.origin = self_;
  info.observed_backlog = static_cast<std::uint32_t>(queue_.size());
  info.requested_period_us = sched_.period_us / 2;
  if (info.requested_period_us <= 0) return;
  if (self_ == sim_.sink()) {
    bs_handle_request(info);
    return;
  }
  SlotEntry entry;
  entry.kind = EntryKind::RateRequest;
  entry.uid = sim_.next_ctrl_uid();
  entry.request = info;
  entry.packet.dst = sim_.sink();  // rides to the base station like data
  entry.designated_next_hops = sim_.routes().next_hops(
      self_, sim_.sink(), RouteMode::SinglePath, entry.uid);
  if (entry.designated_next_hops.empty()) return;
  seen_uids_.insert(entry.uid);
  enqueue_entry(std::move(entry), false);
}

void TarmacNode::handle_flood(const SlotEntry& entry) {
  const RateFloodInfo& flood = entry.flood;
  if (seen_floods_.count(flood.flood_id) != 0) {
    sim_.count_flood_duplicate();
    return;
  }
  seen_floods_.insert(flood.flood_id);

  // Forward exactly once; control entries jump the queue so the flood
  // crosses the network within the propagation allowance.
  SlotEntry copy = entry;
  copy.uid = sim_.next_ctrl_uid();
  sim_.count_flood_forward();
  enqueue_entry(std::move(copy), true);

  pending_switch_ = PendingSwitch{flood.flood_id, flood.new_period_us,
                                  flood.switch_at};
  has_pending_switch_ = true;
  const SimTime now = sim_.engine().now();
  if (flood.switch_at <= now) {
    // Late joiner: switch immediately.
    apply_switch(flood.new_period_us);
    has_pending_switch_ = false;
    return;
  }
  if (flood.switch_at > sim_.config().sim_end_us) return;
  const std::uint32_t flood_id = flood.flood_id;
  sim_.engine().schedule(flood.switch_at, EventKind::RateSwitch, self_,
                         [this, flood_id]() {
                           if (!has_pending_switch_ ||
                               pending_switch_.flood_id != flood_id) {
                             return;
                           }
                           apply_switch(pending_switch_.new_period_us);
                           has_pending_switch_ = false;
                         });
}

void TarmacNode::apply_switch(SimTime new_period) {
  if (new_period == sched_.period_us) return;  // no-op switch
  const SimTime old_period = sched_.period_us;
  sched_.phase_us = sched_.phase_us * new_period / old_period;
  sched_.period_us = new_period;
  ++sched_gen_;

  const SimTime now = sim_.engine().now();
  SimTime next = sched_.phase_us;
  if (next < now) {
    const SimTime k = (now - sched_.phase_us + new_period - 1) / new_period;
    next = sched_.phase_us + k * new_period;
  }
  while (next <= last_attempt_) next += new_period;
  schedule_lattice_send(next);
}

void TarmacNode::bs_handle_request(const RateRequestInfo& request) {
  (void)request;
  const RunConfig& c = sim_.config();
  const SimTime now = sim_.engine().now();
  if (now < bs_settle_until_) return;  // a flood is still in flight
  const std::int64_t window = now / c.bs_request_window_us;
  if (window == bs_last_request_window_) return;
  const SimTime new_period = std::max(sched_.period_us / 2, c.tau_min_us);
  if (new_period == sched_.period_us) return;
  bs_last_request_window_ = window;
  bs_issue_flood(new_period);
}

void TarmacNode::bs_occupancy_tick() {
  const RunConfig& c = sim_.config();
  const double window_max =
      static_cast<double>(bs_window_max_occ_permille_) / 1000.0;
  bs_window_max_occ_permille_ = 0;
  const SimTime now = sim_.engine().now();
  if (now < bs_settle_until_) return;
  if (window_max >= c.bs_reduce_threshold) return;
  const SimTime new_period = std::min(sched_.period_us * 2, c.tau_max_us);
  if (new_period == sched_.period_us) return;
  bs_issue_flood(new_period);
}

void TarmacNode::bs_issue_flood(SimTime new_period) {
  const RunConfig& c = sim_.config();
  const SimTime now = sim_.engine().now();
  const SimTime allowance =
      (sim_.network_diameter() + 2) * sched_.period_us;
  // Rounding the switch time to a multiple of both periods keeps per-node
  // send counts equal inside every rate epoch.
  const SimTime grain = std::max(sched_.period_us, new_period);
  const SimTime switch_at = ((now + allowance + grain - 1) / grain) * grain;
  if (switch_at > c.sim_end_us) return;  // cannot take effect in this run

  RateFloodInfo flood;
  flood.flood_id = ++flood_counter_;
  flood.new_period_us = new_period;
  flood.switch_at = switch_at;

  SlotEntry entry;
  entry.kind = EntryKind::RateFlood;
  entry.uid = sim_.next_ctrl_uid();
  entry.flood = flood;
  entry.designated_next_hops = {kBroadcast};

  seen_floods_.insert(flood.flood_id);
  sim_.count_flood_forward();
  enqueue_entry(std::move(entry), true);

  bs_settle_until_ = switch_at + 2 * kSecond;
  sim_.record_epoch(switch_at, new_period);
  pending_switch_ = PendingSwitch{flood.flood_id, new_period, switch_at};
  has_pending_switch_ = true;
  const std::uint32_t flood_id = flood.flood_id;
  sim_.engine().schedule(switch_at, EventKind::RateSwitch, self_,
                         [this, flood_id]() {
                           if (!has_pending_switch_ ||
                               pending_switch_.flood_id != flood_id) {
                             return;
                           }
                           apply_switch(pending_switch_.new_period_us);
                           has_pending_switch_ = false;
                         });
}

void TarmacNode::collect_live_packets(std::vector<std::uint32_t>& out) const {
  for (const SlotEntry& entry : queue_) {
    if (entry.kind == EntryKind::Data) out.push_back(entry.packet.pkt_id);
  }
}

}  // namespace tarmac
