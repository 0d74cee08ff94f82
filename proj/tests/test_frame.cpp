#include <doctest.h>

#include <deque>

#include "tarmac/packet.hpp"
#include "tarmac/rng.hpp"

using namespace tarmac;

namespace {

SlotEntry data_entry(std::uint32_t id, NodeId src, NodeId dst, NodeId hop) {
  SlotEntry e;
  e.kind = EntryKind::Data;
  e.uid = id;
  e.packet.pkt_id = id;
  e.packet.src = src;
  e.packet.dst = dst;
  e.packet.hop_trail = {src};
  e.designated_next_hops = {hop};
  return e;
}

Schedule default_schedule(int slots = 4) {
  Schedule s;
  s.period_us = 1 * kSecond;
  s.phase_us = 0;
  s.slot_count = slots;
  s.slot_bytes = 64;
  return s;
}

}  // namespace

TEST_SUITE("frame") {

TEST_CASE("empty queue packs an all-empty frame of full wire size") {
  std::deque<SlotEntry> queue;
  const TarmacFrame frame = pack_frame(queue, default_schedule(4), 3, 0, 18);
  CHECK(frame.filled() == 0);
  CHECK(frame.slots.size() == 4);
  CHECK(frame.wire_bytes() == 18 + 4 * 64);  // 274 B
  CHECK(unpack_frame(frame, 5).delivered.empty());
  CHECK(unpack_frame(frame, 5).to_forward.empty());
}

TEST_CASE("six queued entries pack four FIFO and leave two") {
  std::deque<SlotEntry> queue;
  for (std::uint32_t i = 0; i < 6; ++i) {
    queue.push_back(data_entry(i, 1, 9, 2));
  }
  const TarmacFrame frame = pack_frame(queue, default_schedule(4), 1, 0, 18);
  CHECK(frame.filled() == 4);
  CHECK(queue.size() == 2);
  CHECK(queue.front().uid == 4);  // FIFO order preserved
  for (int i = 0; i < 4; ++i) {
    REQUIRE(frame.slots[i].has_value());
    CHECK(frame.slots[i]->uid == static_cast<std::uint32_t>(i));
  }
}

TEST_CASE("ten queued entries leave six for the next period") {
  std::deque<SlotEntry> queue;
  for (std::uint32_t i = 0; i < 10; ++i) queue.push_back(data_entry(i, 1, 9, 2));
  const TarmacFrame frame = pack_frame(queue, default_schedule(4), 1, 0, 18);
  CHECK(frame.filled() == 4);
  CHECK(queue.size() == 6);
}

TEST_CASE("occupancy is filled over slot count") {
  std::deque<SlotEntry> queue;
  for (std::uint32_t i = 0; i < 3; ++i) queue.push_back(data_entry(i, 1, 9, 2));
  const TarmacFrame frame = pack_frame(queue, default_schedule(4), 1, 0, 18);
  CHECK(frame.occupancy() == doctest::Approx(0.75));
}

TEST_CASE("wire size is constant across occupancies") {
  // Property: frame size is a pure function of (s, slot_bytes, header);
  // contents never show.
  for (int fill = 0; fill <= 8; ++fill) {
    std::deque<SlotEntry> queue;
    for (int i = 0; i < fill; ++i) {
      queue.push_back(data_entry(static_cast<std::uint32_t>(i), 1, 9, 2));
    }
    const TarmacFrame frame = pack_frame(queue, default_schedule(8), 1, 0, 18);
    CHECK(frame.wire_bytes() == 18 + 8 * 64);
  }
}

TEST_CASE("unpack filters by designation and destination") {
  std::deque<SlotEntry> queue;
  queue.push_back(data_entry(1, 0, 9, 5));  // designated to 5
  queue.push_back(data_entry(2, 0, 9, 5));  // designated to 5
  queue.push_back(data_entry(3, 0, 9, 7));  // designated elsewhere
  queue.push_back(data_entry(4, 0, 5, 7));  // destined for 5 itself
  const TarmacFrame frame = pack_frame(queue, default_schedule(4), 0, 0, 18);

  const UnpackResult at5 = unpack_frame(frame, 5);
  CHECK(at5.to_forward.size() == 2);
  CHECK(at5.delivered.size() == 1);
  CHECK(at5.delivered[0].uid == 4);

  const UnpackResult at7 = unpack_frame(frame, 7);
  CHECK(at7.to_forward.size() == 2);  // uid 3 designated, uid 4 designated
  const UnpackResult at8 = unpack_frame(frame, 8);
  CHECK(at8.to_forward.empty());
  CHECK(at8.delivered.empty());
}

TEST_CASE("round-trip: union of unpacks over receivers recovers the packing") {
  // Property over random packings: no loss, no duplication within a frame.
  RngStream rng(5, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::deque<SlotEntry> queue;
    const int n = static_cast<int>(rng.uniform_u64(9));
    std::vector<std::uint32_t> packed_ids;
    for (int i = 0; i < n; ++i) {
      const NodeId hop = static_cast<NodeId>(rng.uniform_u64(4));
      const NodeId dst = static_cast<NodeId>(4 + rng.uniform_u64(4));
      queue.push_back(
          data_entry(static_cast<std::uint32_t>(trial * 100 + i), 0, dst, hop));
      packed_ids.push_back(static_cast<std::uint32_t>(trial * 100 + i));
    }
    const TarmacFrame frame = pack_frame(queue, default_schedule(8), 0, 0, 18);
    // Each packed entry surfaces exactly once at its designated hop and
    // exactly once at its destination; nothing is lost or duplicated.
    std::vector<std::uint32_t> forwarded, delivered;
    for (NodeId receiver = 0; receiver < 8; ++receiver) {
      const UnpackResult r = unpack_frame(frame, receiver);
      for (const SlotEntry& e : r.delivered) delivered.push_back(e.uid);
      for (const SlotEntry& e : r.to_forward) forwarded.push_back(e.uid);
    }
    std::sort(forwarded.begin(), forwarded.end());
    std::sort(delivered.begin(), delivered.end());
    std::sort(packed_ids.begin(), packed_ids.end());
    CHECK(forwarded == packed_ids);
    CHECK(delivered == packed_ids);
  }
}

TEST_CASE("send lattice is the arithmetic progression phase + k*tau") {
  Schedule s = default_schedule();
  s.period_us = 1 * kSecond;
  s.phase_us = 0;
  CHECK(next_send_times(s, 3 * kSecond) ==
        std::vector<SimTime>{0, kSecond, 2 * kSecond, 3 * kSecond});
  s.phase_us = 250 * kMillisecond;
  CHECK(next_send_times(s, 3 * kSecond) ==
        std::vector<SimTime>{250'000, 1'250'000, 2'250'000});
}

TEST_CASE("capacity in slots per second is s over tau") {
  Schedule s = default_schedule(4);
  s.period_us = 2 * kSecond;
  // 4 slots every 2 s = 2 slots per node per second: over 10 s the lattice
  // offers 4 * 5 + 4 = 24 slots counting the t=0 frame.
  const auto times = next_send_times(s, 10 * kSecond);
  CHECK(times.size() * 4 == 24);
  const double capacity =
      static_cast<double>(s.slot_count) * kSecond / s.period_us;
  CHECK(capacity == doctest::Approx(2.0));
}

}  // TEST_SUITE
