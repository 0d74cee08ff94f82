#include "tarmac/metrics.hpp"

#include <cstdio>

namespace tarmac {

const char* to_string(DropCause cause) {
  switch (cause) {
    case DropCause::QueueOverflow: return "queue_overflow";
    case DropCause::NoRoute: return "no_route";
    case DropCause::RetryLimit: return "retry_limit";
    case DropCause::HeldBusy: return "held_busy";
    case DropCause::Collision: return "collision";
  }
  return "?";
}

void PacketLedger::on_generated(std::uint32_t pkt_id, SimTime created_at) {
  fates_[pkt_id].created_at = created_at;
}

bool PacketLedger::on_delivered(const DataPacket& packet, SimTime at) {
  Fate& fate = fates_.at(packet.pkt_id);
  if (fate.delivered) {
    ++duplicate_deliveries_;
    return false;
  }
  fate.delivered = true;
  DeliveredInfo info;
  info.pkt_id = packet.pkt_id;
  info.src = packet.src;
  info.created_at = packet.created_at;
  info.delivered_at = at;
  info.hops = static_cast<int>(packet.hop_trail.size()) - 1;
  delivered_.push_back(info);
  return true;
}

void PacketLedger::on_drop(std::uint32_t pkt_id, DropCause cause) {
  Fate& fate = fates_.at(pkt_id);
  if (!fate.dropped) {
    fate.dropped = true;
    fate.first_cause = cause;
  }
}

void PacketLedger::mark_live(std::uint32_t pkt_id) {
  fates_.at(pkt_id).live = true;
}

bool PacketLedger::was_delivered(std::uint32_t pkt_id) const {
  const auto it = fates_.find(pkt_id);
  return it != fates_.end() && it->second.delivered;
}

PacketLedger::Totals PacketLedger::finalize(SimTime sim_end) const {
  Totals totals;
  for (const auto& [id, fate] : fates_) {
    (void)id;
    if (fate.delivered) {
      ++totals.delivered;
    } else if (fate.live) {
      ++totals.in_flight;
      totals.sum_censored_delay_us += sim_end - fate.created_at;
    } else if (fate.dropped) {
      ++totals.drops[fate.first_cause];
      totals.sum_censored_delay_us += sim_end - fate.created_at;
    } else {
      ++totals.unaccounted;
    }
  }
  for (const DeliveredInfo& d : delivered_) {
    totals.sum_delay_us += d.delivered_at - d.created_at;
  }
  totals.sum_censored_delay_us += totals.sum_delay_us;
  return totals;
}

std::uint64_t MetricsSummary::drop_total() const {
  std::uint64_t total = 0;
  for (const auto& [cause, count] : drops) {
    (void)cause;
    total += count;
  }
  return total;
}

std::optional<double> MetricsSummary::delivery_ratio() const {
  if (generated == 0) return std::nullopt;
  return static_cast<double>(delivered) / static_cast<double>(generated);
}

std::optional<double> MetricsSummary::avg_delay_us() const {
  if (delivered == 0) return std::nullopt;
  return static_cast<double>(sum_delay_us) / static_cast<double>(delivered);
}

std::optional<double> MetricsSummary::censored_delay_us() const {
  if (generated == 0) return std::nullopt;
  return static_cast<double>(sum_censored_delay_us) /
         static_cast<double>(generated);
}

std::optional<double> MetricsSummary::occupancy() const {
  if (total_slots == 0) return std::nullopt;
  return static_cast<double>(filled_slots) / static_cast<double>(total_slots);
}

std::optional<double> MetricsSummary::collision_ratio() const {
  if (audible_receptions == 0) return std::nullopt;
  return static_cast<double>(collided_receptions) /
         static_cast<double>(audible_receptions);
}

std::optional<double> MetricsSummary::m_over_m() const {
  if (delivered == 0) return std::nullopt;
  return static_cast<double>(physical_tx) / static_cast<double>(delivered);
}

std::optional<double> MetricsSummary::s_over_m() const {
  if (delivered == 0) return std::nullopt;
  return static_cast<double>(physical_bytes) /
         (static_cast<double>(delivered) * static_cast<double>(payload_bytes));
}

std::optional<double> MetricsSummary::energy_per_delivered_uj() const {
  if (delivered == 0) return std::nullopt;
  return energy_uj / static_cast<double>(delivered);
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  if (!v.has_value()) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

}  // namespace

std::string summary_csv_header() {
  return "protocol,rows,cols,spacing_m,sink,slot_count,period_us,slot_bytes,"
         "buffer_slots,pattern,rate_pps,traffic_start_us,traffic_duration_us,"
         "routing_period_us,range_dm,bitrate_bps,max_jitter_us,seed,sim_end_us,"
         "config_hash,generated,delivered,delivery_ratio,avg_delay_us,"
         "censored_delay_us,occupancy,filled_slots,total_slots,M,S_bytes,"
         "M_over_m,S_over_m,collision_ratio,collided_receptions,"
         "audible_receptions,energy_uJ,energy_per_delivered_uJ,"
         "drop_queue_overflow,drop_no_route,drop_retry_limit,drop_held_busy,"
         "drop_collision,in_flight_at_end,duplicate_deliveries,rate_epochs";
}

std::string summary_csv_row(const RunConfig& c, const MetricsSummary& m) {
  auto drop = [&m](DropCause cause) -> std::uint64_t {
    const auto it = m.drops.find(cause);
    return it == m.drops.end() ? 0 : it->second;
  };
  char num[64];
  std::string row;
  auto add = [&row](const std::string& cell) {
    if (!row.empty()) row += ',';
    row += cell;
  };
  add(to_string(c.protocol));
  add(std::to_string(c.rows));
  add(std::to_string(c.cols));
  add(std::to_string(c.spacing_m));
  add(std::to_string(c.sink));
  add(std::to_string(c.slot_count));
  add(std::to_string(c.period_us));
  add(std::to_string(c.slot_bytes));
  add(std::to_string(c.buffer_slots));
  add(to_string(c.pattern));
  std::snprintf(num, sizeof(num), "%.6f", c.rate_pps);
  add(num);
  add(std::to_string(c.traffic_start_us));
  add(std::to_string(c.traffic_duration_us));
  add(std::to_string(c.routing_period_us));
  add(std::to_string(c.channel.range_dm));
  add(std::to_string(c.channel.bitrate_bps));
  add(std::to_string(c.channel.max_jitter_us));
  add(std::to_string(c.seed));
  add(std::to_string(c.sim_end_us));
  add(config_hash(c));
  add(std::to_string(m.generated));
  add(std::to_string(m.delivered));
  add(opt_cell(m.delivery_ratio()));
  add(opt_cell(m.avg_delay_us()));
  add(opt_cell(m.censored_delay_us()));
  add(opt_cell(m.occupancy()));
  add(std::to_string(m.filled_slots));
  add(std::to_string(m.total_slots));
  add(std::to_string(m.physical_tx));
  add(std::to_string(m.physical_bytes));
  add(opt_cell(m.m_over_m()));
  add(opt_cell(m.s_over_m()));
  add(opt_cell(m.collision_ratio()));
  add(std::to_string(m.collided_receptions));
  add(std::to_string(m.audible_receptions));
  std::snprintf(num, sizeof(num), "%.3f", m.energy_uj);
  add(num);
  add(opt_cell(m.energy_per_delivered_uj()));
  add(std::to_string(drop(DropCause::QueueOverflow)));
  add(std::to_string(drop(DropCause::NoRoute)));
  add(std::to_string(drop(DropCause::RetryLimit)));
  add(std::to_string(drop(DropCause::HeldBusy)));
  add(std::to_string(drop(DropCause::Collision)));
  add(std::to_string(m.in_flight_at_end));
  add(std::to_string(m.duplicate_deliveries));
  add(std::to_string(m.rate_epochs));
  return row;
}

}  // namespace tarmac
