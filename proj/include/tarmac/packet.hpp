#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

// Application payload unit. hop_trail records every node that has carried the
// packet, starting with the source.
struct DataPacket {
  std::uint32_t pkt_id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint16_t payload_bytes = 32;
  SimTime created_at = 0;
  std::optional<SimTime> delivered_at;
  std::vector<NodeId> hop_trail;
};

enum class EntryKind : std::uint8_t { Data, RoutingBeacon, RateRequest, RateFlood };

struct RateRequestInfo {
  NodeId origin = 0;
  std::uint32_t observed_backlog = 0;  // slots
  SimTime requested_period_us = 0;
};

struct RateFloodInfo {
  std::uint32_t flood_id = 0;
  SimTime new_period_us = 0;
  SimTime switch_at = 0;
};

// One occupied frame slot: a data packet (or a control rider) plus its
// per-packet routing metadata. The slot header models pkt id (4), destination
// (2) and next-hop designation (2).
struct SlotEntry {
  EntryKind kind = EntryKind::Data;
  std::uint32_t uid = 0;  // == packet.pkt_id for data; unique per control entry
  DataPacket packet;
  RateRequestInfo request;
  RateFloodInfo flood;
  std::vector<NodeId> designated_next_hops;  // 1..2 node ids, or {kBroadcast}
  std::uint16_t slot_header_bytes = 8;
  // Highest queue fill ratio (permille) seen by this entry en route; the base
  // station uses it to decide rate reductions.
  std::uint16_t max_queue_occ_permille = 0;

  NodeId dst() const;
  bool designated_to(NodeId node) const;
};

// Per-node transmission law: fixed period, fixed phase in [0, period), fixed
// slot count. Never depends on traffic.
struct Schedule {
  SimTime period_us = 1'000'000;
  SimTime phase_us = 0;
  int slot_count = 4;
  int slot_bytes = 64;
};

// Fixed-airtime broadcast frame: wire size is frame_header_bytes +
// slot_count * slot_bytes no matter how many slots are used; empty slots are
// hidden by the (modeled) encryption.
struct TarmacFrame {
  NodeId sender = 0;
  std::uint32_t frame_seq = 0;
  int frame_header_bytes = 18;
  int slot_bytes = 64;
  std::vector<std::optional<SlotEntry>> slots;

  std::uint32_t wire_bytes() const {
    return static_cast<std::uint32_t>(frame_header_bytes +
                                      slots.size() * slot_bytes);
  }
  int filled() const;
  double occupancy() const;
};

// Moves the first min(queue size, slot_count) entries FIFO into a fresh
// frame; the remainder stays queued.
TarmacFrame pack_frame(std::deque<SlotEntry>& queue, const Schedule& schedule,
                       NodeId sender, std::uint32_t frame_seq,
                       int frame_header_bytes);

struct UnpackResult {
  std::vector<SlotEntry> delivered;   // entries terminating at the receiver
  std::vector<SlotEntry> to_forward;  // entries designating the receiver
  std::vector<SlotEntry> broadcast;   // entries addressed to every receiver
};

// Filters a received frame down to the slots that concern `receiver`;
// everything else was received but is not this node's responsibility.
UnpackResult unpack_frame(const TarmacFrame& frame, NodeId receiver);

// The full send lattice {phase + k*period : k >= 0} up to and including
// horizon.
std::vector<SimTime> next_send_times(const Schedule& schedule, SimTime horizon);

}  // namespace tarmac
