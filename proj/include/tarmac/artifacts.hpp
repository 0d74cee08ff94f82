#pragma once

#include <string>
#include <vector>

#include "tarmac/adversary.hpp"
#include "tarmac/config.hpp"
#include "tarmac/simulation.hpp"

namespace tarmac {

// tx_log.csv schema: sender,start_us,duration_us,bytes,protocol_kind.
// This file is the adversary's sole input.
std::string tx_log_csv(const std::vector<TransmissionRecord>& log);
std::vector<TxObservation> parse_tx_log_csv(const std::string& text);

// attack_report.csv: long format, metric,node,value.
std::string attack_report_csv(const AttackReport& report);

// flow_truth.csv: from,to forwarding edges (withheld ground truth).
std::string flow_truth_csv(const std::vector<std::pair<NodeId, NodeId>>& edges);
std::vector<std::pair<NodeId, NodeId>> parse_flow_truth_csv(
    const std::string& text);

std::string render_attack_summary(const AttackReport& report);

AttackParams attack_params_from_config(const RunConfig& config);

// Analysis windows for the adversary: one per rate epoch, the last extending
// to the end of the log.
std::vector<std::pair<SimTime, SimTime>> epoch_windows(
    const std::vector<RateEpoch>& epochs);

struct RunArtifacts {
  RunResult result;
  AttackReport report;
  std::string summary_row;
};

// Runs the simulation, runs the analyzer on the produced log, and returns
// everything in memory.
RunArtifacts execute_run(const RunConfig& config);

// execute_run + write summary.csv, tx_log.csv, attack_report.csv and
// flow_truth.csv under config.output_dir. Throws std::runtime_error when the
// directory cannot be created or written.
RunArtifacts execute_and_write(const RunConfig& config);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace tarmac
