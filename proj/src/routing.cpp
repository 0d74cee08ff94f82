#include "tarmac/routing.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace tarmac {

RoutingTable RoutingTable::build(const Channel& channel,
                                 std::vector<NodeId> dsts) {
  std::sort(dsts.begin(), dsts.end());
  dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());

  RoutingTable table;
  const std::size_t n = channel.node_count();
  for (NodeId dst : dsts) {
    PerDst per;
    per.dst = dst;
    per.hops.assign(n, -1);
    per.progress.resize(n);

    std::deque<NodeId> frontier;
    per.hops[dst] = 0;
    frontier.push_back(dst);
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop_front();
      for (NodeId v : channel.neighbors(u)) {
        if (per.hops[v] < 0) {
          per.hops[v] = per.hops[u] + 1;
          frontier.push_back(v);
        }
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (per.hops[u] <= 0) continue;
      for (NodeId v : channel.neighbors(static_cast<NodeId>(u))) {
        if (per.hops[v] >= 0 && per.hops[v] == per.hops[u] - 1) {
          per.progress[u].push_back(v);
        }
      }
      // neighbors() is sorted, so progress lists inherit the order.
    }
    table.tables_.push_back(std::move(per));
  }
  return table;
}

const RoutingTable::PerDst& RoutingTable::table_for(NodeId dst) const {
  for (const auto& per : tables_) {
    if (per.dst == dst) return per;
  }
  throw std::out_of_range("RoutingTable: no table for destination " +
                          std::to_string(dst));
}

int RoutingTable::hop_count(NodeId node, NodeId dst) const {
  return table_for(dst).hops.at(node);
}

std::span<const NodeId> RoutingTable::progress_neighbors(NodeId node,
                                                         NodeId dst) const {
  return table_for(dst).progress.at(node);
}

NodeId RoutingTable::single_next_hop(NodeId node, NodeId dst) const {
  const auto& progress = table_for(dst).progress.at(node);
  return progress.empty() ? kNoNode : progress.front();
}

std::vector<NodeId> RoutingTable::next_hops(NodeId node, NodeId dst,
                                            RouteMode mode,
                                            std::uint32_t pkt_id) const {
  const auto& progress = table_for(dst).progress.at(node);
  if (progress.empty()) return {};
  if (mode == RouteMode::SinglePath || progress.size() == 1) {
    return {progress.front()};
  }
  // Sibling set capped at two.
  return {progress[pkt_id % 2]};
}

int RoutingTable::eccentricity(NodeId from) const {
  const auto& per = table_for(from);
  int worst = 0;
  for (int h : per.hops) worst = std::max(worst, h);
  return worst;
}

}  // namespace tarmac
