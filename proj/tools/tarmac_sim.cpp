// tarmac-sim: run one simulation, a preset sweep, or a standalone traffic
// analysis over a transmission log.
//
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tarmac/artifacts.hpp"
#include "tarmac/metrics.hpp"
#include "tarmac/simulation.hpp"
#include "tarmac/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string output_root() {
  const char* env = std::getenv("TARMAC_SIM_OUT");
  return env != nullptr ? env : "out";
}

tarmac::RunConfig build_config(const std::string& config_path,
                               const std::vector<std::string>& sets) {
  tarmac::RunConfig config;
  if (!config_path.empty()) config = tarmac::load_config_file(config_path);
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got: " + kv);
    }
    tarmac::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  tarmac::validate(config);
  return config;
}

std::string preset_help() {
  std::string help = "Presets:\n";
  for (const tarmac::SweepPreset& p : tarmac::sweep_presets()) {
    help += "  " + p.name + ": " + p.description + "\n";
    for (const tarmac::SweepAxis& axis : p.axes) {
      help += "      " + axis.key + " in {";
      for (std::size_t i = 0; i < axis.values.size(); ++i) {
        if (i) help += ", ";
        help += axis.values[i];
      }
      help += "}\n";
    }
  }
  return help;
}

std::string defaults_help() {
  std::string help = "Config keys and defaults (key = value):\n";
  std::istringstream in(tarmac::canonical_text(tarmac::RunConfig{}));
  std::string line;
  while (std::getline(in, line)) help += "  " + line + "\n";
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tarmac-sim: deterministic simulator for traffic-analysis-"
               "resistant wireless MAC protocols"};
  app.footer(defaults_help() + "\n" + preset_help());
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one configuration");
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  simulate->add_option("--config", config_path, "key=value config file");
  simulate->add_option("--set", sets, "override, e.g. --set period_us=500000");
  simulate->add_option("--out", out_dir, "output directory (default: config/env)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a preset parameter sweep");
  std::string preset_name;
  int seeds = 1;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  std::string sweep_out;
  std::vector<std::string> sweep_sets;
  sweep->add_option("--preset", preset_name, "preset name")->required();
  sweep->add_option("--seeds", seeds, "seeds per configuration (default 1)");
  sweep->add_option("--jobs", jobs, "parallel workers");
  sweep->add_option("--out", sweep_out, "output root");
  sweep->add_option("--set", sweep_sets, "base-config override");

  // attack
  auto* attack = app.add_subcommand(
      "attack", "analyze a transmission log (tx_log.csv schema)");
  std::string log_path;
  std::string truth_path;
  int a_rows = 10, a_cols = 10, a_spacing = 20, a_range_dm = 400;
  std::int64_t a_window = 50'000;
  int a_shuffles = 20, a_repeats = 2;
  std::uint64_t a_seed = 1;
  std::string report_path;
  attack->add_option("--log", log_path, "transmission log CSV")->required();
  attack->add_option("--truth", truth_path, "flow_truth.csv for recovery scoring");
  attack->add_option("--rows", a_rows, "grid rows (attacker knowledge)");
  attack->add_option("--cols", a_cols, "grid cols");
  attack->add_option("--spacing-m", a_spacing, "grid spacing, meters");
  attack->add_option("--range-dm", a_range_dm, "radio range, decimeters");
  attack->add_option("--window-us", a_window, "reaction window");
  attack->add_option("--shuffles", a_shuffles, "surrogate rounds");
  attack->add_option("--min-repeats", a_repeats, "edge claim threshold");
  attack->add_option("--seed", a_seed, "surrogate shuffle seed");
  attack->add_option("--report", report_path, "write attack_report.csv here");

  // presets
  auto* presets = app.add_subcommand(
      "presets", "print the machine-readable preset manifest (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      tarmac::RunConfig config;
      try {
        config = build_config(config_path, sets);
        if (!out_dir.empty()) {
          config.output_dir = out_dir;
        } else if (config.output_dir == "out") {
          config.output_dir = output_root();
        }
        tarmac::validate(config);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      }
      const tarmac::RunArtifacts artifacts = tarmac::execute_and_write(config);
      std::cout << tarmac::summary_csv_header() << "\n"
                << artifacts.summary_row << "\n\n"
                << tarmac::render_attack_summary(artifacts.report)
                << "artifacts written to " << config.output_dir << "\n";
      return kExitOk;
    }

    if (sweep->parsed()) {
      const tarmac::SweepPreset* preset = tarmac::find_preset(preset_name);
      if (preset == nullptr) {
        std::cerr << "config error: unknown preset " << preset_name << "\n"
                  << preset_help();
        return kExitConfig;
      }
      tarmac::RunConfig base;
      try {
        base = build_config("", sweep_sets);
        if (seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      }
      const std::string root =
          !sweep_out.empty() ? sweep_out : output_root() + "/" + preset->name;
      const tarmac::SweepOutcome outcome =
          tarmac::run_sweep(*preset, seeds, jobs, root, base);
      std::cout << outcome.runs_completed << "/" << outcome.runs_total
                << " runs completed; aggregate at " << root
                << "/sweep_summary.csv\n";
      if (outcome.aborted) {
        std::cerr << "sweep aborted: " << outcome.error << "\n";
        return kExitRuntime;
      }
      return kExitOk;
    }

    if (attack->parsed()) {
      const std::vector<tarmac::TxObservation> observations =
          tarmac::parse_tx_log_csv(tarmac::read_file(log_path));
      const tarmac::Topology topology =
          tarmac::Topology::grid(a_rows, a_cols, a_spacing * 10);
      tarmac::AttackParams params;
      params.window_us = a_window;
      params.shuffles = a_shuffles;
      params.edge_min_repeats = a_repeats;
      params.seed = a_seed;
      tarmac::AttackReport report =
          tarmac::analyze(observations, topology, a_range_dm, params);
      if (!truth_path.empty()) {
        report.trace_recovery = tarmac::score_trace_recovery(
            report.claimed_edges,
            tarmac::parse_flow_truth_csv(tarmac::read_file(truth_path)));
      }
      std::cout << tarmac::render_attack_summary(report);
      if (!report_path.empty()) {
        tarmac::write_file(report_path, tarmac::attack_report_csv(report));
      }
      return kExitOk;
    }

    if (presets->parsed()) {
      std::cout << tarmac::preset_manifest_json();
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
