#include "tarmac/engine.hpp"

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace tarmac {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ScheduledSend: return "scheduled-send";
    case EventKind::RetrySend: return "retry-send";
    case EventKind::TxEnd: return "tx-end";
    case EventKind::Timer: return "timer";
    case EventKind::TrafficArrival: return "traffic-arrival";
    case EventKind::RateSwitch: return "rate-switch";
  }
  return "unknown";
}

std::uint64_t Engine::schedule(SimTime fire_at, EventKind kind,
                               std::uint32_t owner, Handler handler) {
  if (fire_at < now_) {
    throw std::logic_error("Engine::schedule: event in the past (fire_at=" +
                           std::to_string(fire_at) +
                           " now=" + std::to_string(now_) + ")");
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Item{fire_at, seq, kind, owner, std::move(handler)});
  ++scheduled_;
  return seq;
}

void Engine::dispatch_one() {
  Item item = queue_.top();
  queue_.pop();
  now_ = item.at;
  ++dispatched_;
  if (trace_ != nullptr) {
    (*trace_) << "t=" << item.at << " seq=" << item.seq
              << " kind=" << to_string(item.kind) << " owner=" << item.owner
              << '\n';
  }
  item.handler();
}

void Engine::run_until(SimTime end) {
  while (!queue_.empty() && queue_.top().at <= end) dispatch_one();
  if (now_ < end) now_ = end;
}

void Engine::drain() {
  while (!queue_.empty()) dispatch_one();
}

}  // namespace tarmac
