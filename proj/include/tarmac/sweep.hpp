#pragma once

#include <string>
#include <vector>

#include "tarmac/config.hpp"

namespace tarmac {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepPreset {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> base;  // key overrides
  std::vector<SweepAxis> axes;
};

const std::vector<SweepPreset>& sweep_presets();
const SweepPreset* find_preset(const std::string& name);

// JSON manifest of every preset: base overrides, axes, Table-style defaults.
std::string preset_manifest_json();

// Cartesian product of the axes over `seeds` seed values (seed = 1..seeds).
std::vector<RunConfig> expand_sweep(const SweepPreset& preset, int seeds,
                                    const RunConfig& base);

struct SweepOutcome {
  std::vector<std::string> rows;  // summary rows in axis order
  int runs_completed = 0;
  int runs_total = 0;
  bool aborted = false;
  std::string error;
};

// Executes every run (worker pool of `jobs` threads), writing per-run
// artifacts under out_root/<config hash>/ and an aggregated sweep_summary.csv
// under out_root. Row order is the expansion order regardless of scheduling.
// A failing run aborts the sweep; completed rows are still written.
SweepOutcome run_sweep(const SweepPreset& preset, int seeds, int jobs,
                       const std::string& out_root, const RunConfig& base);

}  // namespace tarmac
