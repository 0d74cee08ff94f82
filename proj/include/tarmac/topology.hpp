#pragma once

#include <cstdint>
#include <vector>

namespace tarmac {

using NodeId = std::uint16_t;
constexpr NodeId kNoNode = 0xFFFF;
constexpr NodeId kBroadcast = 0xFFFE;

// Positions are integer decimeters so range comparisons are exact: two nodes
// at exactly the transmission range ARE neighbors.
struct NodeSite {
  NodeId id = 0;
  std::int32_t x_dm = 0;
  std::int32_t y_dm = 0;
};

class Topology {
 public:
  // rows x cols grid, node id = row * cols + col, each node at the center of
  // its cell; (0,0) is the upper-left corner.
  static Topology grid(int rows, int cols, int spacing_dm);

  std::size_t size() const { return sites_.size(); }
  const NodeSite& site(NodeId id) const { return sites_.at(id); }
  const std::vector<NodeSite>& sites() const { return sites_; }

  static std::int64_t distance_sq_dm(const NodeSite& a, const NodeSite& b);

 private:
  std::vector<NodeSite> sites_;
};

}  // namespace tarmac
