#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wattmark/orchestrator/config.hpp"
#include "wattmark/orchestrator/results.hpp"
#include "wattmark/orchestrator/telemetry_factory.hpp"
#include "wattmark/stats/analysis.hpp"

namespace wattmark::orchestrator {

struct ExperimentHooks {
  TelemetryFactory telemetry = make_default_telemetry;
  std::function<void(const TrialRow&)> on_trial;  ///< progress callback
};

/// One trial: start sampling, launch the workload, wait, seal the trace,
/// ingest the sidecar, compute metrics. A non-zero workload exit returns a
/// failed row; other problems throw (SchemaError, ProtocolViolation,
/// TelemetryError, InvalidTraceError, ...). Output files go under
/// config.output_dir: traces/, sidecars/, logs/.
TrialRow run_trial(const ExperimentConfig& config, std::size_t condition_index,
                   std::size_t trial_index, const ExperimentHooks& hooks = {});

struct ExperimentResult {
  std::filesystem::path results_path;
  std::vector<TrialRow> rows;
  std::vector<std::string> failed_trials;
  /// One matrix per metric_names() entry; empty if the design is unbalanced.
  std::map<std::string, stats::ConditionMatrix> matrices;
  /// Analysis of pe_energy when the matrices could be built and analysed.
  std::optional<stats::AnalysisBundle> analysis;
  std::string analysis_error;
};

/// Runs every trial sequentially (conditions in declared order), appends one
/// results line per trial, then builds the per-metric matrices from the rows
/// as persisted and analyses pe_energy. Trial-level errors become failed rows.
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks = {});

}  // namespace wattmark::orchestrator
