#include "tarmac/artifacts.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tarmac/metrics.hpp"

namespace tarmac {

std::string tx_log_csv(const std::vector<TransmissionRecord>& log) {
  std::string out = "sender,start_us,duration_us,bytes,protocol_kind\n";
  for (const TransmissionRecord& rec : log) {
    out += std::to_string(rec.sender);
    out += ',';
    out += std::to_string(rec.start);
    out += ',';
    out += std::to_string(rec.duration);
    out += ',';
    out += std::to_string(rec.bytes);
    out += ',';
    out += rec.kind;
    out += '\n';
  }
  return out;
}

std::vector<TxObservation> parse_tx_log_csv(const std::string& text) {
  std::vector<TxObservation> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    TxObservation o;
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      switch (col) {
        case 0: o.sender = static_cast<NodeId>(std::stoul(cell)); break;
        case 1: o.start_us = std::stoll(cell); break;
        case 2: o.duration_us = std::stoll(cell); break;
        case 3: o.bytes = static_cast<std::uint32_t>(std::stoul(cell)); break;
        case 4: o.kind = cell; break;
        default: throw std::runtime_error("tx log: too many columns");
      }
      ++col;
    }
    if (col != 5) throw std::runtime_error("tx log: bad row: " + line);
    out.push_back(std::move(o));
  }
  return out;
}

namespace {
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}
}  // namespace

std::string attack_report_csv(const AttackReport& report) {
  std::string out = "metric,node,value\n";
  out += "time_correlation,," + fmt(report.time_correlation) + "\n";
  out += "spatial_cv,," + fmt(report.spatial_cv) + "\n";
  for (std::size_t i = 0; i < report.spatial_cv_per_window.size(); ++i) {
    out += "spatial_cv_epoch," + std::to_string(i) + "," +
           fmt(report.spatial_cv_per_window[i]) + "\n";
  }
  out += "trace_recovery,,";
  if (report.trace_recovery.has_value()) out += fmt(*report.trace_recovery);
  out += "\n";
  out += "claimed_edges,," + std::to_string(report.claimed_edges.size()) + "\n";
  for (std::size_t n = 0; n < report.per_node_rate.size(); ++n) {
    out += "per_node_rate," + std::to_string(n) + "," +
           fmt(report.per_node_rate[n]) + "\n";
  }
  return out;
}

std::string flow_truth_csv(
    const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::string out = "from,to\n";
  for (const auto& [a, b] : edges) {
    out += std::to_string(a) + "," + std::to_string(b) + "\n";
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> parse_flow_truth_csv(
    const std::string& text) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("flow truth: bad row: " + line);
    }
    edges.emplace_back(static_cast<NodeId>(std::stoul(line.substr(0, comma))),
                       static_cast<NodeId>(std::stoul(line.substr(comma + 1))));
  }
  return edges;
}

std::string render_attack_summary(const AttackReport& report) {
  std::ostringstream out;
  out << "time correlation:  " << fmt(report.time_correlation) << "\n";
  out << "spatial CV:        " << fmt(report.spatial_cv) << "\n";
  for (std::size_t i = 0; i < report.spatial_cv_per_window.size(); ++i) {
    out << "  epoch " << i << " CV:      " << fmt(report.spatial_cv_per_window[i])
        << "\n";
  }
  out << "claimed edges:     " << report.claimed_edges.size() << "\n";
  out << "trace recovery:    ";
  if (report.trace_recovery.has_value()) {
    out << fmt(*report.trace_recovery);
  } else {
    out << "n/a (no ground truth)";
  }
  out << "\n";
  return out.str();
}

AttackParams attack_params_from_config(const RunConfig& config) {
  AttackParams params;
  params.window_us = config.attack_window_us;
  params.shuffles = config.attack_shuffles;
  params.edge_min_repeats = config.attack_edge_min_repeats;
  params.seed = config.seed;
  return params;
}

std::vector<std::pair<SimTime, SimTime>> epoch_windows(
    const std::vector<RateEpoch>& epochs) {
  std::vector<std::pair<SimTime, SimTime>> windows;
  constexpr SimTime kMax = std::numeric_limits<SimTime>::max();
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const SimTime begin = epochs[i].start;
    const SimTime end = i + 1 < epochs.size() ? epochs[i + 1].start : kMax;
    windows.emplace_back(begin, end);
  }
  return windows;
}

RunArtifacts execute_run(const RunConfig& config) {
  RunArtifacts artifacts;
  Simulation sim(config);
  artifacts.result = sim.run();

  const Topology topology =
      Topology::grid(config.rows, config.cols, config.spacing_m * 10);
  AttackParams params = attack_params_from_config(config);
  params.windows = epoch_windows(artifacts.result.epochs);
  const std::vector<TxObservation> observations =
      observations_from_records(artifacts.result.tx_log);
  artifacts.report =
      analyze(observations, topology, config.channel.range_dm, params);
  artifacts.report.trace_recovery = score_trace_recovery(
      artifacts.report.claimed_edges,
      true_forward_edges(artifacts.result.tx_log));
  artifacts.summary_row = summary_csv_row(config, artifacts.result.metrics);
  return artifacts;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunArtifacts execute_and_write(const RunConfig& config) {
  RunArtifacts artifacts = execute_run(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output dir " + config.output_dir +
                             ": " + ec.message());
  }
  const std::string base = config.output_dir + "/";
  write_file(base + "summary.csv",
             summary_csv_header() + "\n" + artifacts.summary_row + "\n");
  write_file(base + "tx_log.csv", tx_log_csv(artifacts.result.tx_log));
  write_file(base + "attack_report.csv", attack_report_csv(artifacts.report));
  write_file(base + "flow_truth.csv",
             flow_truth_csv(true_forward_edges(artifacts.result.tx_log)));
  return artifacts;
}

}  // namespace tarmac
