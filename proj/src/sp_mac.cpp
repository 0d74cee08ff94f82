#include "tarmac/sp_mac.hpp"

#include <algorithm>

#include "tarmac/simulation.hpp"

namespace tarmac {

std::uint32_t SpNode::data_bytes() const {
  return kDataHeaderBytes + static_cast<std::uint32_t>(sim_.config().payload_bytes);
}

void SpNode::on_packet_arrival(DataPacket packet) {
  if (sim_.routes().hop_count(self_, packet.dst) < 0) {
    sim_.drop(packet.pkt_id, DropCause::NoRoute);
    return;
  }
  if (queue_.size() >= static_cast<std::size_t>(sim_.config().buffer_slots)) {
    sim_.drop(packet.pkt_id, DropCause::QueueOverflow);
    return;
  }
  seen_.insert(packet.pkt_id);
  queue_.push_back(std::move(packet));
  if (phase_ == Phase::Idle) begin_service();
}

void SpNode::begin_service() {
  if (phase_ != Phase::Idle || queue_.empty()) return;
  if (sim_.engine().now() > sim_.config().sim_end_us) return;
  next_hop_ = sim_.routes().single_next_hop(self_, queue_.front().dst);
  if (next_hop_ == kNoNode) {
    sim_.drop(queue_.front().pkt_id, DropCause::NoRoute);
    queue_.pop_front();
    begin_service();
    return;
  }
  attempt_ = 1;
  cur_exchange_ = ++exchange_counter_;
  phase_ = Phase::WaitCts;
  csma_send_rts();
}

void SpNode::csma_send_rts() {
  const Channel& ch = sim_.channel();
  const SimTime now = sim_.engine().now();
  const std::uint32_t ex = cur_exchange_;
  const bool busy = now < resp_busy_until_ || ch.transmitting(self_, now) ||
                    (ch.config().csma_defer && ch.carrier_busy(self_, now));
  if (busy) {
    const SimTime jitter =
        ch.config().max_jitter_us > 0
            ? sim_.rng(self_, RngPurpose::Jitter)
                  .uniform_int(0, ch.config().max_jitter_us)
            : 0;
    const SimTime retry_at =
        std::max(ch.idle_at(self_, now), resp_busy_until_) + jitter;
    sim_.engine().schedule(retry_at, EventKind::RetrySend, self_,
                           [this, ex]() {
                             if (phase_ == Phase::WaitCts && cur_exchange_ == ex)
                               csma_send_rts();
                           });
    return;
  }

  UnicastPdu rts;
  rts.type = UnicastPdu::Type::Rts;
  rts.from = self_;
  rts.to = next_hop_;
  rts.exchange_id = cur_exchange_;
  sim_.transmit(self_, kRtsBytes, "sp_rts", Payload(std::move(rts)), {});

  const SimTime deadline = sim_.engine().now() +
                           sim_.channel().airtime_us(kRtsBytes) +
                           sim_.config().sifs_us +
                           sim_.channel().airtime_us(kCtsBytes) +
                           kTimeoutMarginUs;
  sim_.engine().schedule(deadline, EventKind::Timer, self_, [this, ex]() {
    if (phase_ == Phase::WaitCts && cur_exchange_ == ex) fail_attempt();
  });
}

void SpNode::handle_cts(const UnicastPdu& pdu) {
  if (phase_ != Phase::WaitCts || pdu.exchange_id != cur_exchange_ ||
      pdu.from != next_hop_) {
    return;
  }
  phase_ = Phase::WaitAck;
  const std::uint32_t ex = cur_exchange_;
  const SimTime at = sim_.engine().now() + sim_.config().sifs_us;
  // SIFS responses transmit without re-sensing the carrier.
  sim_.engine().schedule(at, EventKind::Timer, self_, [this, ex]() {
    if (phase_ != Phase::WaitAck || cur_exchange_ != ex) return;
    if (sim_.node_transmitting(self_)) return;  // ack timeout will retry
    UnicastPdu data;
    data.type = UnicastPdu::Type::Data;
    data.from = self_;
    data.to = next_hop_;
    data.exchange_id = ex;
    data.packet = queue_.front();
    sim_.transmit(self_, data_bytes(), "sp_data", Payload(std::move(data)),
                  {queue_.front().pkt_id});
    const SimTime deadline = sim_.engine().now() +
                             sim_.channel().airtime_us(data_bytes()) +
                             sim_.config().sifs_us +
                             sim_.channel().airtime_us(kAckBytes) +
                             kTimeoutMarginUs;
    sim_.engine().schedule(deadline, EventKind::Timer, self_, [this, ex]() {
      if (phase_ == Phase::WaitAck && cur_exchange_ == ex) fail_attempt();
    });
  });
}

void SpNode::handle_data(const UnicastPdu& pdu) {
  // Link-level ACK regardless of duplicate status.
  const SimTime ack_at = sim_.engine().now() + sim_.config().sifs_us;
  resp_busy_until_ = ack_at + sim_.channel().airtime_us(kAckBytes);
  UnicastPdu ack;
  ack.type = UnicastPdu::Type::Ack;
  ack.from = self_;
  ack.to = pdu.from;
  ack.exchange_id = pdu.exchange_id;
  sim_.engine().schedule(ack_at, EventKind::Timer, self_,
                         [this, ack]() mutable {
                           if (sim_.node_transmitting(self_)) return;
                           sim_.transmit(self_, kAckBytes, "sp_ack",
                                         Payload(std::move(ack)), {});
                         });

  DataPacket packet = *pdu.packet;
  if (packet.dst == self_) {
    packet.hop_trail.push_back(self_);
    sim_.deliver(std::move(packet));
    return;
  }
  if (seen_.count(packet.pkt_id) != 0) return;  // retransmitted duplicate
  if (queue_.size() >= static_cast<std::size_t>(sim_.config().buffer_slots)) {
    sim_.drop(packet.pkt_id, DropCause::QueueOverflow);
    return;
  }
  seen_.insert(packet.pkt_id);
  packet.hop_trail.push_back(self_);
  queue_.push_back(std::move(packet));
  if (phase_ == Phase::Idle) {
    // Start after our committed ACK has cleared the air.
    sim_.engine().schedule(resp_busy_until_, EventKind::Timer, self_,
                           [this]() { begin_service(); });
  }
}

void SpNode::handle_ack(const UnicastPdu& pdu) {
  if (phase_ != Phase::WaitAck || pdu.exchange_id != cur_exchange_ ||
      pdu.from != next_hop_) {
    return;
  }
  finish(true);
}

void SpNode::fail_attempt() {
  if (attempt_ >= sim_.config().retry_limit) {
    sim_.drop(queue_.front().pkt_id, DropCause::RetryLimit);
    finish(false);
    return;
  }
  ++attempt_;
  phase_ = Phase::WaitCts;
  cur_exchange_ = ++exchange_counter_;
  start_attempt();
}

void SpNode::start_attempt() {
  // Binary exponential backoff: contention window doubles per retry.
  const int shift = std::min(attempt_ - 1, 5);
  const std::int64_t cw = std::min<std::int64_t>(1023, (32ll << shift) - 1);
  const SimTime wait =
      kSlotUs * sim_.rng(self_, RngPurpose::Backoff).uniform_int(0, cw);
  const std::uint32_t ex = cur_exchange_;
  sim_.engine().schedule(sim_.engine().now() + wait, EventKind::RetrySend,
                         self_, [this, ex]() {
                           if (phase_ == Phase::WaitCts && cur_exchange_ == ex)
                             csma_send_rts();
                         });
}

void SpNode::finish(bool success) {
  (void)success;
  queue_.pop_front();
  phase_ = Phase::Idle;
  next_hop_ = kNoNode;
  if (!queue_.empty()) begin_service();
}

void SpNode::on_receive(const Payload& payload,
                        const TransmissionRecord& record) {
  (void)record;
  const UnicastPdu* pdu = std::get_if<UnicastPdu>(&payload);
  if (pdu == nullptr) return;
  if (pdu->to != self_) return;  // overheard, not addressed here
  switch (pdu->type) {
    case UnicastPdu::Type::Rts: {
      // A node mid-exchange does not grant the channel; the requester
      // times out and backs off.
      if (phase_ != Phase::Idle) break;
      const SimTime cts_at = sim_.engine().now() + sim_.config().sifs_us;
      // Reserve the whole granted exchange (CTS..ACK), NAV-style, so our own
      // traffic cannot stomp on the DATA we just invited.
      resp_busy_until_ = cts_at + sim_.channel().airtime_us(kCtsBytes) +
                         sim_.config().sifs_us +
                         sim_.channel().airtime_us(data_bytes()) +
                         sim_.config().sifs_us +
                         sim_.channel().airtime_us(kAckBytes);
      UnicastPdu cts;
      cts.type = UnicastPdu::Type::Cts;
      cts.from = self_;
      cts.to = pdu->from;
      cts.exchange_id = pdu->exchange_id;
      sim_.engine().schedule(cts_at, EventKind::Timer, self_,
                             [this, cts]() mutable {
                               if (sim_.node_transmitting(self_)) return;
                               sim_.transmit(self_, kCtsBytes, "sp_cts",
                                             Payload(std::move(cts)), {});
                             });
      break;
    }
    case UnicastPdu::Type::Cts:
      handle_cts(*pdu);
      break;
    case UnicastPdu::Type::Data:
      handle_data(*pdu);
      break;
    case UnicastPdu::Type::Ack:
      handle_ack(*pdu);
      break;
    default:
      break;
  }
}

void SpNode::collect_live_packets(std::vector<std::uint32_t>& out) const {
  for (const DataPacket& p : queue_) out.push_back(p.pkt_id);
}

}  // namespace tarmac
