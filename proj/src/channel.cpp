#include "tarmac/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace tarmac {

RxOutcome TransmissionRecord::outcome_for(NodeId receiver) const {
  for (const auto& [node, outcome] : outcomes) {
    if (node == receiver) return outcome;
  }
  return RxOutcome::OutOfRange;
}

Channel::Channel(const Topology& topology, const ChannelConfig& config)
    : config_(config) {
  if (config_.range_dm < 0 || config_.bitrate_bps <= 0 ||
      config_.effective_interference_dm() < config_.range_dm) {
    throw std::invalid_argument("Channel: bad config");
  }
  const auto& sites = topology.sites();
  const auto build = [&sites](std::vector<std::vector<NodeId>>& adj,
                              int radius_dm) {
    const std::int64_t radius_sq =
        static_cast<std::int64_t>(radius_dm) * radius_dm;
    adj.resize(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = 0; j < sites.size(); ++j) {
        if (i == j || radius_dm <= 0) continue;
        if (Topology::distance_sq_dm(sites[i], sites[j]) <= radius_sq) {
          adj[i].push_back(static_cast<NodeId>(j));
        }
      }
      std::sort(adj[i].begin(), adj[i].end());
    }
  };
  build(neighbors_, config_.range_dm);
  build(interferers_, config_.effective_interference_dm());
}

std::span<const NodeId> Channel::neighbors(NodeId node) const {
  return neighbors_.at(node);
}

bool Channel::in_range(NodeId a, NodeId b) const {
  const auto& n = neighbors_.at(a);
  return std::binary_search(n.begin(), n.end(), b);
}

bool Channel::interferes(NodeId a, NodeId b) const {
  const auto& n = interferers_.at(a);
  return std::binary_search(n.begin(), n.end(), b);
}

SimTime Channel::airtime_us(std::uint32_t bytes) const {
  const std::int64_t bits = static_cast<std::int64_t>(bytes) * 8;
  return (bits * 1'000'000 + config_.bitrate_bps - 1) / config_.bitrate_bps;
}

std::uint32_t Channel::begin_broadcast(NodeId sender, std::uint32_t bytes,
                                       std::string kind,
                                       std::vector<std::uint32_t> carried,
                                       SimTime at) {
  TransmissionRecord rec;
  rec.tx_id = static_cast<std::uint32_t>(log_.size());
  rec.sender = sender;
  rec.start = at;
  rec.duration = airtime_us(bytes);
  rec.bytes = bytes;
  rec.kind = std::move(kind);
  rec.carried_pkt_ids = std::move(carried);
  rec.outcomes.reserve(neighbors_.at(sender).size());
  for (NodeId n : neighbors_.at(sender)) {
    rec.outcomes.emplace_back(n, RxOutcome::Received);
  }

  // Overlap destroys every overlapping reception at a shared receiver.
  // Intervals are half-open, so a transmission ending exactly at `at` does
  // not overlap.
  for (std::uint32_t id : active_) {
    TransmissionRecord& other = log_.at(id);
    if (other.end() <= at) continue;  // off air, cleanup event still pending
    if (other.sender == sender) {
      throw std::logic_error("Channel: overlapping transmissions by node " +
                             std::to_string(sender));
    }
    // Receivers inside either sender's interference radius lose both frames.
    for (auto& [node, outcome] : rec.outcomes) {
      if (node == other.sender || interferes(other.sender, node)) {
        outcome = RxOutcome::Collided;
      }
    }
    for (auto& [node, outcome] : other.outcomes) {
      if (node == sender || interferes(sender, node)) {
        outcome = RxOutcome::Collided;
      }
    }
  }

  active_.push_back(rec.tx_id);
  log_.push_back(std::move(rec));
  return log_.back().tx_id;
}

void Channel::end_broadcast(std::uint32_t tx_id) {
  active_.erase(std::remove(active_.begin(), active_.end(), tx_id),
                active_.end());
}

bool Channel::carrier_busy(NodeId node, SimTime at) const {
  for (std::uint32_t id : active_) {
    const TransmissionRecord& rec = log_[id];
    if (rec.sender == node) continue;
    if (rec.start <= at && at < rec.end() && interferes(rec.sender, node)) {
      return true;
    }
  }
  return false;
}

bool Channel::transmitting(NodeId node, SimTime at) const {
  for (std::uint32_t id : active_) {
    const TransmissionRecord& rec = log_[id];
    if (rec.sender == node && rec.start <= at && at < rec.end()) return true;
  }
  return false;
}

SimTime Channel::idle_at(NodeId node, SimTime at) const {
  SimTime idle = at;
  for (std::uint32_t id : active_) {
    const TransmissionRecord& rec = log_[id];
    if (rec.end() <= at) continue;
    if (rec.sender == node || interferes(rec.sender, node)) {
      idle = std::max(idle, rec.end());
    }
  }
  return idle;
}

}  // namespace tarmac
