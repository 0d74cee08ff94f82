#pragma once

#include <vector>

#include "tarmac/config.hpp"
#include "tarmac/time.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

// Source set for a traffic pattern, sorted by node id.
std::vector<NodeId> select_sources(const RunConfig& config);

struct Arrival {
  SimTime at = 0;
  NodeId src = 0;
};

// CBR arrivals: each source emits at exact 1/rate intervals with a seeded
// per-source phase, over the half-open window [start, start + duration).
// The half-open window makes the count exactly sources * rate * duration
// whenever rate * duration is integral.
std::vector<Arrival> cbr_arrivals(const RunConfig& config,
                                  const std::vector<NodeId>& sources);

}  // namespace tarmac
