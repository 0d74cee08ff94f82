#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tarmac/channel.hpp"
#include "tarmac/config.hpp"
#include "tarmac/packet.hpp"
#include "tarmac/time.hpp"

namespace tarmac {

enum class DropCause : std::uint8_t {
  QueueOverflow,
  NoRoute,
  RetryLimit,
  HeldBusy,
  Collision,
};

const char* to_string(DropCause cause);

struct DeliveredInfo {
  std::uint32_t pkt_id = 0;
  NodeId src = 0;
  SimTime created_at = 0;
  SimTime delivered_at = 0;
  int hops = 0;
};

// Tracks the fate of every generated data packet. A packet is classified
// exactly once at finalize time: delivered beats still-live beats dropped,
// so duplicate copies on sibling paths never double-count.
class PacketLedger {
 public:
  void on_generated(std::uint32_t pkt_id, SimTime created_at);
  // First delivery wins; duplicates are ignored and counted.
  bool on_delivered(const DataPacket& packet, SimTime at);
  void on_drop(std::uint32_t pkt_id, DropCause cause);
  void mark_live(std::uint32_t pkt_id);

  std::uint64_t generated() const { return fates_.size(); }
  bool was_delivered(std::uint32_t pkt_id) const;
  std::uint64_t duplicate_deliveries() const { return duplicate_deliveries_; }
  const std::vector<DeliveredInfo>& delivered() const { return delivered_; }

  struct Totals {
    std::uint64_t delivered = 0;
    std::uint64_t in_flight = 0;
    std::map<DropCause, std::uint64_t> drops;
    SimTime sum_delay_us = 0;
    // Delivered packets contribute their delay; undelivered ones contribute
    // sim_end - created_at, making survivorship visible next to the
    // delivered-only mean.
    SimTime sum_censored_delay_us = 0;
    std::uint64_t unaccounted = 0;  // must stay 0; conservation check
  };
  Totals finalize(SimTime sim_end) const;

 private:
  struct Fate {
    SimTime created_at = 0;
    bool delivered = false;
    bool live = false;
    bool dropped = false;
    DropCause first_cause = DropCause::QueueOverflow;
  };
  std::map<std::uint32_t, Fate> fates_;
  std::vector<DeliveredInfo> delivered_;
  std::uint64_t duplicate_deliveries_ = 0;
};

struct MetricsSummary {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;  // m: effective packets
  std::uint64_t physical_tx = 0;   // M
  std::uint64_t physical_bytes = 0;  // S
  std::uint64_t collided_receptions = 0;
  std::uint64_t audible_receptions = 0;
  SimTime sum_delay_us = 0;
  SimTime sum_censored_delay_us = 0;  // undelivered contribute sim_end - created
  std::uint64_t filled_slots = 0;
  std::uint64_t total_slots = 0;
  double energy_uj = 0.0;
  std::map<DropCause, std::uint64_t> drops;
  std::uint64_t in_flight_at_end = 0;
  std::uint64_t duplicate_deliveries = 0;
  int rate_epochs = 1;

  std::uint64_t drop_total() const;
  std::optional<double> delivery_ratio() const;
  std::optional<double> avg_delay_us() const;
  std::optional<double> censored_delay_us() const;
  std::optional<double> occupancy() const;
  std::optional<double> collision_ratio() const;  // collided / audible receptions
  std::optional<double> m_over_m() const;         // M / m
  std::optional<double> s_over_m() const;         // S / (m * payload)
  std::optional<double> energy_per_delivered_uj() const;

  int payload_bytes = 32;  // denominator for S/m
};

// summary.csv column order; stable interface for the sweep harness.
std::string summary_csv_header();
std::string summary_csv_row(const RunConfig& config,
                            const MetricsSummary& metrics);

}  // namespace tarmac
