#include "tarmac/intrusion_macs.hpp"

#include <algorithm>

#include "tarmac/simulation.hpp"

namespace tarmac {

// ---------------------------------------------------------------- Intrusion 1

std::uint32_t Intrusion1Node::wire_bytes() const {
  // Data, dummies and sink beacons share one wire size; anything else would
  // be trivially distinguishable.
  return 24 + static_cast<std::uint32_t>(sim_.config().payload_bytes);
}

void Intrusion1Node::start() {
  parent_ = sim_.routes().single_next_hop(self_, sim_.sink());
  const SimTime phase = sim_.rng(self_, RngPurpose::Phase)
                            .uniform_int(0, sim_.config().period_us - 1);
  sim_.engine().schedule(phase, EventKind::ScheduledSend, self_,
                         [this, phase]() { tick(phase); });
}

void Intrusion1Node::tick(SimTime at) {
  sim_.record_attempt(self_, at);
  const SimTime next = at + sim_.config().period_us;
  if (next <= sim_.config().sim_end_us) {
    sim_.engine().schedule(next, EventKind::ScheduledSend, self_,
                           [this, next]() { tick(next); });
  }
  csma_step();
}

void Intrusion1Node::csma_step() {
  const Channel& ch = sim_.channel();
  const SimTime now = sim_.engine().now();
  const bool busy = ch.transmitting(self_, now) ||
                    (ch.config().csma_defer && ch.carrier_busy(self_, now));
  if (!busy) {
    emit();
    return;
  }
  const SimTime jitter =
      ch.config().max_jitter_us > 0
          ? sim_.rng(self_, RngPurpose::Jitter)
                .uniform_int(0, ch.config().max_jitter_us)
          : 0;
  sim_.engine().schedule(ch.idle_at(self_, now) + jitter,
                         EventKind::RetrySend, self_,
                         [this]() { csma_step(); });
}

void Intrusion1Node::emit() {
  UnicastPdu pdu;
  std::vector<std::uint32_t> carried;
  if (self_ == sim_.sink()) {
    pdu.type = UnicastPdu::Type::Beacon;
    pdu.from = self_;
    pdu.to = kBroadcast;
    pdu.release_ids = pending_release_;
    pending_release_.clear();
  } else if (!buffer_.empty()) {
    // Same head packet every interval until the parent's forward is
    // overheard.
    pdu.type = UnicastPdu::Type::Data;
    pdu.from = self_;
    pdu.to = parent_;
    pdu.packet = buffer_.front();
    awaiting_ = buffer_.front().pkt_id;
    carried.push_back(buffer_.front().pkt_id);
  } else {
    pdu.type = UnicastPdu::Type::Dummy;
    pdu.from = self_;
    pdu.to = parent_;
  }
  sim_.transmit(self_, wire_bytes(), "i1_data", Payload(std::move(pdu)),
                std::move(carried));
}

void Intrusion1Node::on_packet_arrival(DataPacket packet) {
  if (parent_ == kNoNode) {
    sim_.drop(packet.pkt_id, DropCause::NoRoute);
    return;
  }
  if (buffer_.size() >= static_cast<std::size_t>(sim_.config().buffer_slots)) {
    sim_.drop(packet.pkt_id, DropCause::QueueOverflow);
    return;
  }
  seen_.insert(packet.pkt_id);
  buffer_.push_back(std::move(packet));
}

void Intrusion1Node::on_receive(const Payload& payload,
                                const TransmissionRecord& record) {
  (void)record;
  const UnicastPdu* pdu = std::get_if<UnicastPdu>(&payload);
  if (pdu == nullptr) return;

  // Implicit acknowledgement: the parent forwarding our head packet (or the
  // sink naming it in a beacon) releases it.
  if (awaiting_.has_value() && pdu->from == parent_) {
    bool released = false;
    if (pdu->type == UnicastPdu::Type::Data && pdu->packet.has_value() &&
        pdu->packet->pkt_id == *awaiting_) {
      released = true;
    } else if (pdu->type == UnicastPdu::Type::Beacon) {
      released = std::find(pdu->release_ids.begin(), pdu->release_ids.end(),
                           *awaiting_) != pdu->release_ids.end();
    }
    if (released) {
      buffer_.pop_front();
      awaiting_.reset();
    }
  }

  if (pdu->type != UnicastPdu::Type::Data || pdu->to != self_) return;
  DataPacket packet = *pdu->packet;
  if (packet.dst == self_) {
    const std::uint32_t id = packet.pkt_id;
    packet.hop_trail.push_back(self_);
    sim_.deliver(std::move(packet));
    // Re-announced on every beacon until the child stops resending.
    pending_release_.push_back(id);
    return;
  }
  if (seen_.count(packet.pkt_id) != 0) return;
  if (buffer_.size() >= static_cast<std::size_t>(sim_.config().buffer_slots)) {
    sim_.drop(packet.pkt_id, DropCause::QueueOverflow);
    return;
  }
  seen_.insert(packet.pkt_id);
  packet.hop_trail.push_back(self_);
  buffer_.push_back(std::move(packet));
}

void Intrusion1Node::collect_live_packets(
    std::vector<std::uint32_t>& out) const {
  for (const DataPacket& p : buffer_) out.push_back(p.pkt_id);
}

// ---------------------------------------------------------------- Intrusion 2

std::uint32_t Intrusion2Node::wire_bytes() const {
  return 24 + static_cast<std::uint32_t>(sim_.config().payload_bytes);
}

void Intrusion2Node::on_packet_arrival(DataPacket packet) {
  accept(std::move(packet), false);
}

void Intrusion2Node::accept(DataPacket packet, bool forwarded) {
  if (seen_.count(packet.pkt_id) != 0) return;  // already carried here
  if (held_.has_value()) {
    sim_.drop(packet.pkt_id, DropCause::HeldBusy);  // no buffering
    return;
  }
  const auto progress = sim_.routes().progress_neighbors(self_, packet.dst);
  const auto all = sim_.channel().neighbors(self_);
  NodeId next = kNoNode;
  RngStream& rng = sim_.rng(self_, RngPurpose::Route);
  const double fake = sim_.config().fake_path_prob;
  if (fake > 0.0 && all.size() > progress.size() && rng.uniform01() < fake) {
    // Decoy direction: any neighbor that makes no progress.
    std::vector<NodeId> decoys;
    for (NodeId n : all) {
      if (std::find(progress.begin(), progress.end(), n) == progress.end()) {
        decoys.push_back(n);
      }
    }
    next = decoys[rng.uniform_u64(decoys.size())];
  } else if (!progress.empty()) {
    next = progress[rng.uniform_u64(progress.size())];
  }
  if (next == kNoNode) {
    sim_.drop(packet.pkt_id, DropCause::NoRoute);
    return;
  }
  seen_.insert(packet.pkt_id);
  if (forwarded) packet.hop_trail.push_back(self_);
  held_ = std::move(packet);
  held_next_ = next;
  ++hold_gen_;
  send_held(hold_gen_);
  schedule_resend(hold_gen_);
}

void Intrusion2Node::send_held(std::uint32_t gen) {
  if (!held_.has_value() || gen != hold_gen_) return;
  const Channel& ch = sim_.channel();
  const SimTime now = sim_.engine().now();
  const bool busy = ch.transmitting(self_, now) ||
                    (ch.config().csma_defer && ch.carrier_busy(self_, now));
  if (busy) {
    const SimTime jitter =
        ch.config().max_jitter_us > 0
            ? sim_.rng(self_, RngPurpose::Jitter)
                  .uniform_int(0, ch.config().max_jitter_us)
            : 0;
    sim_.engine().schedule(ch.idle_at(self_, now) + jitter,
                           EventKind::RetrySend, self_,
                           [this, gen]() { send_held(gen); });
    return;
  }
  UnicastPdu pdu;
  pdu.type = UnicastPdu::Type::Data;
  pdu.from = self_;
  pdu.to = held_next_;
  pdu.packet = *held_;
  sim_.transmit(self_, wire_bytes(), "i2_data", Payload(std::move(pdu)),
                {held_->pkt_id});
}

void Intrusion2Node::schedule_resend(std::uint32_t gen) {
  const SimTime next = sim_.engine().now() + sim_.config().period_us;
  if (next > sim_.config().sim_end_us) return;
  sim_.engine().schedule(next, EventKind::Timer, self_, [this, gen]() {
    if (!held_.has_value() || gen != hold_gen_) return;
    send_held(gen);
    schedule_resend(gen);
  });
}

void Intrusion2Node::schedule_release_beacon() {
  if (beacon_pending_) return;
  const SimTime at = sim_.engine().now() + sim_.config().period_us;
  if (at > sim_.config().sim_end_us) return;
  beacon_pending_ = true;
  sim_.engine().schedule(at, EventKind::Timer, self_, [this]() {
    beacon_pending_ = false;
    if (pending_release_.empty()) return;
    if (sim_.channel().transmitting(self_, sim_.engine().now())) {
      schedule_release_beacon();
      return;
    }
    UnicastPdu pdu;
    pdu.type = UnicastPdu::Type::Beacon;
    pdu.from = self_;
    pdu.to = kBroadcast;
    pdu.release_ids = pending_release_;
    pending_release_.clear();
    sim_.transmit(self_, wire_bytes(), "i2_data", Payload(std::move(pdu)), {});
  });
}

void Intrusion2Node::on_receive(const Payload& payload,
                                const TransmissionRecord& record) {
  (void)record;
  const UnicastPdu* pdu = std::get_if<UnicastPdu>(&payload);
  if (pdu == nullptr) return;

  if (held_.has_value() && pdu->from == held_next_) {
    bool released = false;
    if (pdu->type == UnicastPdu::Type::Data && pdu->packet.has_value() &&
        pdu->packet->pkt_id == held_->pkt_id) {
      released = true;
    } else if (pdu->type == UnicastPdu::Type::Beacon) {
      released =
          std::find(pdu->release_ids.begin(), pdu->release_ids.end(),
                    held_->pkt_id) != pdu->release_ids.end();
    }
    if (released) {
      held_.reset();
      held_next_ = kNoNode;
      ++hold_gen_;
    }
  }

  if (pdu->type != UnicastPdu::Type::Data || pdu->to != self_) return;
  DataPacket packet = *pdu->packet;
  if (packet.dst == self_) {
    const std::uint32_t id = packet.pkt_id;
    packet.hop_trail.push_back(self_);
    sim_.deliver(std::move(packet));
    pending_release_.push_back(id);
    schedule_release_beacon();
    return;
  }
  accept(std::move(packet), true);
}

void Intrusion2Node::collect_live_packets(
    std::vector<std::uint32_t>& out) const {
  if (held_.has_value()) out.push_back(held_->pkt_id);
}

}  // namespace tarmac
