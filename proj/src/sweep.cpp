#include "tarmac/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tarmac/artifacts.hpp"
#include "tarmac/metrics.hpp"

namespace tarmac {

const std::vector<SweepPreset>& sweep_presets() {
  static const std::vector<SweepPreset> kPresets = {
      SweepPreset{
          "fig-busslots",
          "delivery/occupancy/collisions/delay/energy vs frame size and period",
          {{"protocol", "tarmac"}, {"pattern", "all_to_sink"}, {"rate_pps", "2"}},
          {SweepAxis{"slot_count", {"1", "2", "4", "8"}},
           SweepAxis{"period_us", {"250000", "500000", "1000000", "2000000"}}}},
      SweepPreset{
          "fig-busptn",
          "source-set density and rate study",
          {{"protocol", "tarmac"}},
          {SweepAxis{"pattern", {"all_nodes", "one_third", "corner_quarter"}},
           SweepAxis{"rate_pps", {"1", "2"}}}},
      SweepPreset{
          "fig-intrusion1",
          "buffer sweep, all-to-sink 2 pps, vs the fixed-interval baseline",
          {{"pattern", "all_to_sink"}, {"rate_pps", "2"}},
          {SweepAxis{"protocol", {"tarmac", "intrusion1", "sp"}},
           SweepAxis{"buffer_slots", {"8", "16", "32", "64"}}}},
      SweepPreset{
          "fig-intrusion2",
          "transmission-period sweep vs the single-held-packet baseline",
          {{"pattern", "all_to_sink"}, {"rate_pps", "2"}},
          {SweepAxis{"protocol", {"tarmac", "intrusion2", "sp"}},
           SweepAxis{"period_us", {"250000", "500000", "1000000", "2000000"}}}},
      SweepPreset{
          "fig-mp-adapt",
          "multipath and adaptive gain across source densities",
          {{"rate_pps", "2"}},
          {SweepAxis{"protocol",
                     {"tarmac", "tarmac_multipath", "tarmac_adaptive"}},
           SweepAxis{"pattern",
                     {"corner_quarter", "one_third", "all_nodes"}}}},
  };
  return kPresets;
}

const SweepPreset* find_preset(const std::string& name) {
  for (const SweepPreset& p : sweep_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string preset_manifest_json() {
  nlohmann::json manifest;
  const RunConfig defaults;
  manifest["defaults"] = nlohmann::json::object();
  {
    // Reuse the canonical key=value rendering for the defaults block.
    std::istringstream in(canonical_text(defaults));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      manifest["defaults"][line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  manifest["presets"] = nlohmann::json::array();
  for (const SweepPreset& p : sweep_presets()) {
    nlohmann::json jp;
    jp["name"] = p.name;
    jp["description"] = p.description;
    jp["base"] = nlohmann::json::object();
    for (const auto& [k, v] : p.base) jp["base"][k] = v;
    jp["axes"] = nlohmann::json::array();
    for (const SweepAxis& axis : p.axes) {
      nlohmann::json ja;
      ja["key"] = axis.key;
      ja["values"] = axis.values;
      jp["axes"].push_back(ja);
    }
    manifest["presets"].push_back(jp);
  }
  return manifest.dump(2) + "\n";
}

std::vector<RunConfig> expand_sweep(const SweepPreset& preset, int seeds,
                                    const RunConfig& base) {
  RunConfig root = base;
  for (const auto& [k, v] : preset.base) apply_override(root, k, v);

  std::vector<RunConfig> configs = {root};
  for (const SweepAxis& axis : preset.axes) {
    std::vector<RunConfig> next;
    for (const RunConfig& c : configs) {
      for (const std::string& value : axis.values) {
        RunConfig v = c;
        apply_override(v, axis.key, value);
        next.push_back(std::move(v));
      }
    }
    configs = std::move(next);
  }
  std::vector<RunConfig> out;
  for (const RunConfig& c : configs) {
    for (int s = 1; s <= seeds; ++s) {
      RunConfig v = c;
      v.seed = static_cast<std::uint64_t>(s);
      out.push_back(std::move(v));
    }
  }
  return out;
}

SweepOutcome run_sweep(const SweepPreset& preset, int seeds, int jobs,
                       const std::string& out_root, const RunConfig& base) {
  namespace fs = std::filesystem;
  std::vector<RunConfig> configs = expand_sweep(preset, seeds, base);
  for (RunConfig& c : configs) {
    c.output_dir = out_root + "/" + config_hash(c);
  }

  SweepOutcome outcome;
  outcome.runs_total = static_cast<int>(configs.size());
  outcome.rows.assign(configs.size(), "");

  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (ec) {
    outcome.aborted = true;
    outcome.error = "cannot create " + out_root + ": " + ec.message();
    return outcome;
  }

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;

  const int workers = std::max(1, jobs);
  auto work = [&]() {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        const RunArtifacts artifacts = execute_and_write(configs[i]);
        std::lock_guard<std::mutex> lock(mutex);
        outcome.rows[i] = artifacts.summary_row;
        ++outcome.runs_completed;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mutex);
        failed.store(true);
        outcome.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  outcome.aborted = failed.load();

  // Partial results are preserved even when a run fails.
  std::string csv = summary_csv_header() + "\n";
  for (const std::string& row : outcome.rows) {
    if (!row.empty()) csv += row + "\n";
  }
  write_file(out_root + "/sweep_summary.csv", csv);
  return outcome;
}

}  // namespace tarmac
