#pragma once

#include <cstdint>

namespace tarmac {

// Named purposes for per-node random streams. Every consumer draws from its
// own (node, purpose) stream, so adding draws to one feature never perturbs
// another feature's sequence.
enum class RngPurpose : std::uint32_t {
  Phase = 1,       // transmission schedule phase offsets
  Jitter = 2,      // CSMA post-defer backoff
  Backoff = 3,     // unicast retry backoff
  Route = 4,       // randomized next-hop choices
  Traffic = 5,     // CBR source phase
  PatternSelect = 6,  // source-set selection
  Shuffle = 7,     // adversary surrogate shuffles
};

// xoshiro256** seeded via splitmix64. Fixed-width integer arithmetic only:
// identical (seed, stream_id) gives an identical draw sequence on every
// platform, unlike the standard <random> distributions.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Unbiased value in [0, bound); bound must be > 0.
  std::uint64_t uniform_u64(std::uint64_t bound);

  // Inclusive range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // [0, 1) with 53-bit resolution.
  double uniform01();

 private:
  std::uint64_t state_[4];
};

inline std::uint64_t stream_id_for(RngPurpose purpose, std::uint32_t entity) {
  return (static_cast<std::uint64_t>(purpose) << 32) | entity;
}

}  // namespace tarmac
