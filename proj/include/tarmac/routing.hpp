#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tarmac/channel.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

enum class RouteMode : std::uint8_t { SinglePath, Multipath };

// Static hop-count routing over the unit-disk neighbor graph, built once by
// BFS from each destination in use. Next hops always make strict hop-count
// progress, so forwarding is loop-free by construction.
class RoutingTable {
 public:
  static RoutingTable build(const Channel& channel, std::vector<NodeId> dsts);

  // -1 when unreachable.
  int hop_count(NodeId node, NodeId dst) const;

  // Neighbors strictly closer to dst, sorted by node id.
  std::span<const NodeId> progress_neighbors(NodeId node, NodeId dst) const;

  // Lowest-id progress neighbor; kNoNode when none (unreachable or self).
  NodeId single_next_hop(NodeId node, NodeId dst) const;

  // Single path: the tie-broken hop. Multipath: one of (up to) the two
  // lowest-id equal-progress siblings, rotated by pkt_id so consecutive
  // packets spread across sibling paths without extra transmissions.
  std::vector<NodeId> next_hops(NodeId node, NodeId dst, RouteMode mode,
                                std::uint32_t pkt_id) const;

  // Longest hop count from `from` to any reachable node.
  int eccentricity(NodeId from) const;

 private:
  struct PerDst {
    NodeId dst;
    std::vector<int> hops;
    std::vector<std::vector<NodeId>> progress;
  };
  const PerDst& table_for(NodeId dst) const;

  std::vector<PerDst> tables_;
};

}  // namespace tarmac
