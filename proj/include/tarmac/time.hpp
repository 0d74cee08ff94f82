#pragma once

#include <cstdint>

namespace tarmac {

// Simulation clock value in integer microseconds. All protocol times (periods,
// phases, jitter, airtimes) are exact integers so runs replay identically on
// any platform.
using SimTime = std::int64_t;

constexpr SimTime kMillisecond = 1'000;
constexpr SimTime kSecond = 1'000'000;

constexpr SimTime msec(std::int64_t v) { return v * kMillisecond; }
constexpr SimTime sec(std::int64_t v) { return v * kSecond; }

}  // namespace tarmac
