#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <vector>

#include "tarmac/time.hpp"

namespace tarmac {

enum class EventKind : std::uint8_t {
  ScheduledSend,
  RetrySend,
  TxEnd,
  Timer,
  TrafficArrival,
  RateSwitch,
};

const char* to_string(EventKind kind);

// Single-threaded discrete-event loop. Dispatch order is (fire_at, seq) with
// seq the global issuance counter, so ties resolve by scheduling order.
// Traffic arrivals are pre-scheduled before any protocol event is issued;
// protocol events therefore keep the same relative seq order across runs that
// differ only in workload.
class Engine {
 public:
  using Handler = std::function<void()>;

  SimTime now() const { return now_; }

  // fire_at must not precede the current clock; scheduling into the past is a
  // programming error and throws.
  std::uint64_t schedule(SimTime fire_at, EventKind kind, std::uint32_t owner,
                         Handler handler);

  // Dispatches every event with fire_at <= end, then sets the clock to end.
  void run_until(SimTime end);

  // Dispatches everything still pending, advancing the clock past the last
  // run_until horizon. Used to let in-flight MAC activity (deferred sends,
  // tx completions) finish once protocol timers have stopped.
  void drain();

  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t dispatched_count() const { return dispatched_; }
  std::uint64_t pending_count() const { return queue_.size(); }

  // Optional line-oriented dispatch trace for debugging and replay checks.
  void set_trace(std::ostream* os) { trace_ = os; }

 private:
  struct Item {
    SimTime at;
    std::uint64_t seq;
    EventKind kind;
    std::uint32_t owner;
    Handler handler;
  };
  struct After {
    bool operator()(const Item& a, const Item& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  void dispatch_one();

  std::priority_queue<Item, std::vector<Item>, After> queue_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t dispatched_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace tarmac
