#include "tarmac/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "tarmac/rng.hpp"

namespace tarmac {

std::vector<NodeId> select_sources(const RunConfig& config) {
  const int n = config.node_count();
  std::vector<NodeId> sources;
  switch (config.pattern) {
    case PatternKind::AllToSink:
    case PatternKind::AllNodes: {
      for (int i = 0; i < n; ++i) sources.push_back(static_cast<NodeId>(i));
      break;
    }
    case PatternKind::OneThird: {
      // floor(N/3) ids drawn without replacement from a dedicated stream.
      std::vector<NodeId> pool;
      for (int i = 0; i < n; ++i) pool.push_back(static_cast<NodeId>(i));
      RngStream rng(config.seed,
                    stream_id_for(RngPurpose::PatternSelect, 0));
      const int want = n / 3;
      for (int k = 0; k < want; ++k) {
        const std::size_t idx = rng.uniform_u64(pool.size());
        sources.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      std::sort(sources.begin(), sources.end());
      break;
    }
    case PatternKind::CornerQuarter: {
      // The (rows/2 x cols/2) block in the corner opposite the sink's
      // default up-left position: a crowded source area far from the sink.
      const int r0 = config.rows - config.rows / 2;
      const int c0 = config.cols - config.cols / 2;
      for (int r = r0; r < config.rows; ++r) {
        for (int c = c0; c < config.cols; ++c) {
          sources.push_back(static_cast<NodeId>(r * config.cols + c));
        }
      }
      break;
    }
    case PatternKind::Single: {
      sources.push_back(config.single_source);
      break;
    }
  }
  return sources;
}

std::vector<Arrival> cbr_arrivals(const RunConfig& config,
                                  const std::vector<NodeId>& sources) {
  std::vector<Arrival> arrivals;
  if (config.rate_pps <= 0.0 || config.traffic_duration_us <= 0) {
    return arrivals;
  }
  const SimTime interval =
      static_cast<SimTime>(std::llround(1e6 / config.rate_pps));
  const SimTime window_end = config.traffic_start_us + config.traffic_duration_us;
  for (NodeId src : sources) {
    RngStream rng(config.seed, stream_id_for(RngPurpose::Traffic, src));
    const SimTime phase = rng.uniform_int(0, interval - 1);
    for (SimTime t = config.traffic_start_us + phase; t < window_end;
         t += interval) {
      arrivals.push_back(Arrival{t, src});
    }
  }
  return arrivals;
}

}  // namespace tarmac
