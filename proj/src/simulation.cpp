#include "tarmac/simulation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "tarmac/intrusion_macs.hpp"
#include "tarmac/sp_mac.hpp"
#include "tarmac/tarmac_mac.hpp"

namespace tarmac {

std::vector<std::pair<NodeId, NodeId>> true_forward_edges(
    const std::vector<TransmissionRecord>& log) {
  // Per packet, the ordered list of transmitters; consecutive distinct
  // transmitters form the forwarding edges.
  std::map<std::uint32_t, std::vector<NodeId>> transmitters;
  for (const TransmissionRecord& rec : log) {
    for (std::uint32_t pkt : rec.carried_pkt_ids) {
      auto& v = transmitters[pkt];
      if (v.empty() || v.back() != rec.sender) v.push_back(rec.sender);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [pkt, v] : transmitters) {
    (void)pkt;
    for (std::size_t i = 1; i < v.size(); ++i) {
      edges.emplace_back(v[i - 1], v[i]);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

Simulation::Simulation(const RunConfig& config) : config_(config) {
  validate(config_);
  topology_ = Topology::grid(config_.rows, config_.cols, config_.spacing_m * 10);
  channel_ = std::make_unique<Channel>(topology_, config_.channel);
  routes_ = std::make_unique<RoutingTable>(
      RoutingTable::build(*channel_, {config_.sink}));
  diameter_ = routes_->eccentricity(config_.sink);
  attempts_.resize(topology_.size());
  per_node_filled_.assign(topology_.size(), 0);
  per_node_slots_.assign(topology_.size(), 0);
  epochs_.push_back(RateEpoch{0, config_.period_us});
  if (!config_.trace_file.empty()) {
    trace_out_ = std::make_unique<std::ofstream>(config_.trace_file);
    if (!*trace_out_) {
      throw std::runtime_error("cannot open trace file " + config_.trace_file);
    }
    engine_.set_trace(trace_out_.get());
  }
}

Simulation::~Simulation() = default;

RngStream& Simulation::rng(NodeId node, RngPurpose purpose) {
  const std::uint64_t sid = stream_id_for(purpose, node);
  auto it = streams_.find(sid);
  if (it == streams_.end()) {
    it = streams_.emplace(sid, RngStream(config_.seed, sid)).first;
  }
  return it->second;
}

RouteMode Simulation::route_mode() const {
  return config_.protocol == Protocol::TarmacMultipath ? RouteMode::Multipath
                                                       : RouteMode::SinglePath;
}

void Simulation::build_nodes() {
  const int n = config_.node_count();
  macs_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const NodeId id = static_cast<NodeId>(i);
    switch (config_.protocol) {
      case Protocol::Tarmac:
      case Protocol::TarmacMultipath:
        macs_.push_back(std::make_unique<TarmacNode>(*this, id, false));
        break;
      case Protocol::TarmacAdaptive:
        macs_.push_back(std::make_unique<TarmacNode>(*this, id, true));
        break;
      case Protocol::ShortestPath:
        macs_.push_back(std::make_unique<SpNode>(*this, id));
        break;
      case Protocol::Intrusion1:
        macs_.push_back(std::make_unique<Intrusion1Node>(*this, id));
        break;
      case Protocol::Intrusion2:
        macs_.push_back(std::make_unique<Intrusion2Node>(*this, id));
        break;
    }
  }
}

void Simulation::schedule_traffic() {
  // All arrivals are issued before any protocol event so that protocol event
  // ordering is independent of the workload.
  const std::vector<NodeId> sources = select_sources(config_);
  const std::vector<Arrival> arrivals = cbr_arrivals(config_, sources);
  for (const Arrival& a : arrivals) {
    DataPacket pkt;
    pkt.pkt_id = pkt_id_counter_++;
    pkt.src = a.src;
    pkt.dst = config_.sink;
    pkt.payload_bytes = static_cast<std::uint16_t>(config_.payload_bytes);
    pkt.created_at = a.at;
    pkt.hop_trail = {a.src};
    ledger_.on_generated(pkt.pkt_id, a.at);
    engine_.schedule(a.at, EventKind::TrafficArrival, a.src,
                     [this, pkt = std::move(pkt)]() {
                       if (pkt.dst == pkt.src) {
                         deliver(pkt);  // zero transmissions
                         return;
                       }
                       macs_[pkt.src]->on_packet_arrival(pkt);
                     });
  }
}

void Simulation::transmit(NodeId sender, std::uint32_t bytes, const char* kind,
                          Payload payload,
                          std::vector<std::uint32_t> carried_pkt_ids) {
  const SimTime now = engine_.now();
  const std::uint32_t tx_id = channel_->begin_broadcast(
      sender, bytes, kind, std::move(carried_pkt_ids), now);
  const SimTime end = channel_->record(tx_id).end();
  engine_.schedule(
      end, EventKind::TxEnd, sender,
      [this, tx_id, payload = std::move(payload)]() {
        channel_->end_broadcast(tx_id);
        const TransmissionRecord& rec = channel_->record(tx_id);

        // A TARMAC data entry is lost when no designated hop (nor the
        // destination itself) received the frame: broadcast has no
        // retransmission, so the copy is gone.
        if (const TarmacFrame* frame = std::get_if<TarmacFrame>(&payload)) {
          for (const auto& slot : frame->slots) {
            if (!slot.has_value() || slot->kind != EntryKind::Data) continue;
            bool reached = false;
            for (const auto& [node, outcome] : rec.outcomes) {
              if (outcome != RxOutcome::Received) continue;
              if (slot->designated_to(node) || slot->packet.dst == node) {
                reached = true;
                break;
              }
            }
            if (!reached) drop(slot->packet.pkt_id, DropCause::Collision);
          }
        }

        for (const auto& [node, outcome] : rec.outcomes) {
          if (outcome == RxOutcome::Received) {
            macs_[node]->on_receive(payload, rec);
          }
        }
      });
}

bool Simulation::node_transmitting(NodeId node) const {
  return channel_->transmitting(node, engine_.now());
}

void Simulation::deliver(DataPacket packet) {
  const SimTime now = engine_.now();
  packet.delivered_at = now;
  ledger_.on_delivered(packet, now);
}

void Simulation::drop(std::uint32_t pkt_id, DropCause cause) {
  ledger_.on_drop(pkt_id, cause);
}

bool Simulation::seen_delivered(std::uint32_t pkt_id) const {
  return ledger_.was_delivered(pkt_id);
}

void Simulation::record_attempt(NodeId node, SimTime at) {
  attempts_[node].push_back(at);
}

void Simulation::record_slot_fill(NodeId node, int filled, int total) {
  per_node_filled_[node] += static_cast<std::uint64_t>(filled);
  per_node_slots_[node] += static_cast<std::uint64_t>(total);
}

void Simulation::record_epoch(SimTime switch_at, SimTime new_period) {
  epochs_.push_back(RateEpoch{switch_at, new_period});
}

void Simulation::finalize(RunResult& result) {
  // Anything still buffered or held is in flight, not lost.
  std::vector<std::uint32_t> live;
  for (const auto& mac : macs_) mac->collect_live_packets(live);
  for (std::uint32_t id : live) ledger_.mark_live(id);

  const PacketLedger::Totals totals = ledger_.finalize(config_.sim_end_us);
  if (totals.unaccounted != 0) {
    throw std::logic_error("packet ledger: " +
                           std::to_string(totals.unaccounted) +
                           " packets with no recorded fate");
  }

  MetricsSummary& m = result.metrics;
  m.payload_bytes = config_.payload_bytes;
  m.generated = ledger_.generated();
  m.delivered = totals.delivered;
  m.sum_delay_us = totals.sum_delay_us;
  m.drops = totals.drops;
  m.in_flight_at_end = totals.in_flight;
  m.duplicate_deliveries = ledger_.duplicate_deliveries();
  m.rate_epochs = static_cast<int>(epochs_.size());

  m.sum_censored_delay_us = totals.sum_censored_delay_us;

  for (std::uint64_t f : per_node_filled_) m.filled_slots += f;
  for (std::uint64_t s : per_node_slots_) m.total_slots += s;

  const std::vector<TransmissionRecord>& log = channel_->log();
  m.physical_tx = log.size();
  double energy = 0.0;
  for (const TransmissionRecord& rec : log) {
    m.physical_bytes += rec.bytes;
    energy += config_.e_tx_uj_per_byte * rec.bytes;
    for (const auto& [node, outcome] : rec.outcomes) {
      (void)node;
      ++m.audible_receptions;
      if (outcome == RxOutcome::Collided) ++m.collided_receptions;
      energy += config_.e_rx_uj_per_byte * rec.bytes;
    }
  }
  m.energy_uj = energy;

  result.delivered = ledger_.delivered();
  result.attempts = attempts_;
  result.epochs = epochs_;
  result.per_node_filled = per_node_filled_;
  result.per_node_slots = per_node_slots_;
  result.flood_forwards = flood_forwards_;
  result.flood_duplicates = flood_duplicates_;
  result.events_scheduled = engine_.scheduled_count();
  result.events_dispatched = engine_.dispatched_count();
  result.tx_log = channel_->take_log();
}

RunResult Simulation::run() {
  build_nodes();
  schedule_traffic();
  for (auto& mac : macs_) mac->start();

  engine_.run_until(config_.sim_end_us);
  // Protocol timers stop at sim_end; what remains is in-flight MAC work
  // (deferred sends, timeouts, tx completions), which must finish so every
  // attempted emission is accounted for.
  engine_.drain();

  RunResult result;
  result.config = config_;
  finalize(result);
  return result;
}

}  // namespace tarmac
