#include "tarmac/packet.hpp"

#include <algorithm>

namespace tarmac {

NodeId SlotEntry::dst() const {
  switch (kind) {
    case EntryKind::Data: return packet.dst;
    case EntryKind::RateRequest: return packet.dst;  // routed like data
    case EntryKind::RoutingBeacon:
    case EntryKind::RateFlood: return kBroadcast;
  }
  return kNoNode;
}

bool SlotEntry::designated_to(NodeId node) const {
  for (NodeId n : designated_next_hops) {
    if (n == node || n == kBroadcast) return true;
  }
  return false;
}

int TarmacFrame::filled() const {
  int n = 0;
  for (const auto& s : slots) n += s.has_value() ? 1 : 0;
  return n;
}

double TarmacFrame::occupancy() const {
  if (slots.empty()) return 0.0;
  return static_cast<double>(filled()) / static_cast<double>(slots.size());
}

TarmacFrame pack_frame(std::deque<SlotEntry>& queue, const Schedule& schedule,
                       NodeId sender, std::uint32_t frame_seq,
                       int frame_header_bytes) {
  TarmacFrame frame;
  frame.sender = sender;
  frame.frame_seq = frame_seq;
  frame.frame_header_bytes = frame_header_bytes;
  frame.slot_bytes = schedule.slot_bytes;
  frame.slots.resize(static_cast<std::size_t>(schedule.slot_count));
  const std::size_t take =
      std::min(queue.size(), static_cast<std::size_t>(schedule.slot_count));
  for (std::size_t i = 0; i < take; ++i) {
    frame.slots[i] = std::move(queue.front());
    queue.pop_front();
  }
  return frame;
}

UnpackResult unpack_frame(const TarmacFrame& frame, NodeId receiver) {
  UnpackResult out;
  for (const auto& slot : frame.slots) {
    if (!slot.has_value()) continue;
    const SlotEntry& entry = *slot;
    if (entry.dst() == kBroadcast) {
      out.broadcast.push_back(entry);
    } else if (entry.dst() == receiver) {
      out.delivered.push_back(entry);
    } else if (entry.designated_to(receiver)) {
      out.to_forward.push_back(entry);
    }
  }
  return out;
}

std::vector<SimTime> next_send_times(const Schedule& schedule,
                                     SimTime horizon) {
  std::vector<SimTime> times;
  for (SimTime t = schedule.phase_us; t <= horizon; t += schedule.period_us) {
    times.push_back(t);
  }
  return times;
}

}  // namespace tarmac
