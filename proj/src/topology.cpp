#include "tarmac/topology.hpp"

#include <stdexcept>

namespace tarmac {

Topology Topology::grid(int rows, int cols, int spacing_dm) {
  if (rows < 1 || cols < 1 || spacing_dm < 1) {
    throw std::invalid_argument("Topology::grid: bad dimensions");
  }
  Topology t;
  t.sites_.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      NodeSite s;
      s.id = static_cast<NodeId>(r * cols + c);
      s.x_dm = c * spacing_dm;
      s.y_dm = r * spacing_dm;
      t.sites_.push_back(s);
    }
  }
  return t;
}

std::int64_t Topology::distance_sq_dm(const NodeSite& a, const NodeSite& b) {
  const std::int64_t dx = a.x_dm - b.x_dm;
  const std::int64_t dy = a.y_dm - b.y_dm;
  return dx * dx + dy * dy;
}

}  // namespace tarmac
