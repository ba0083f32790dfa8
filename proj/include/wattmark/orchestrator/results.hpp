#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "wattmark/metrics/efficiency.hpp"
#include "wattmark/orchestrator/sidecar.hpp"
#include "wattmark/stats/condition_matrix.hpp"

namespace wattmark::orchestrator {

/// Efficiency metrics are stored rounded to this many significant digits.
inline constexpr int kReportDigits = 9;

/// Rounds every EfficiencyReport field to kReportDigits.
metrics::EfficiencyReport rounded_report(const metrics::EfficiencyReport& report);

/// One line of the results file: a trial's identity, its workload result and
/// power summary, and the efficiency metrics computed from them. The power
/// trace itself lives in a CSV referenced by `trace` (relative to the results
/// file's directory).
struct TrialRow {
  std::string trial_id;
  std::string condition;
  std::size_t condition_index = 0;
  std::size_t trial_index = 0;
  std::int64_t target_tokens = 0;
  std::int64_t epochs = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  ///< "ok" or "failed"
  std::string reason;         ///< failure reason; empty when ok
  std::string backend;
  double sample_interval_s = 0.0;

  // Present once the power trace was sealed.
  std::string trace;
  std::size_t sample_count = 0;
  std::size_t skipped_reads = 0;
  std::int64_t workload_start_ms = 0;

  // Present when ok.
  WorkloadResult workload;
  double ms_params = 0.0;
  double tt_tokens = 0.0;
  double tt_scale = 1.0;
  double cs_tflops = 0.0;
  double k_norm = 1.0;
  double baseline_pe = 1.0;
  metrics::EfficiencyReport report;

  bool ok() const noexcept { return status == "ok"; }
};

/// Compact single-line JSON, keys in a fixed order.
std::string encode_row(const TrialRow& row);
/// Throws SchemaError (field path prefixed with "line N").
TrialRow decode_row(std::string_view line, std::size_t line_no = 0);

/// Truncates on open; every append is flushed so a crash loses at most one line.
class ResultsWriter {
 public:
  explicit ResultsWriter(const std::filesystem::path& path);
  void append(const TrialRow& row);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<TrialRow> read_results(const std::filesystem::path& path);

/// Metrics that can be analysed: pe_energy, pe_dissertation, inv_ppl,
/// tflops_per_watt, pe_loss, rms_watts, sample_count, eval_loss.
const std::vector<std::string>& metric_names();
/// Throws ConfigError for an unknown metric.
double metric_value(const TrialRow& row, std::string_view metric);

/// Condition labels ordered by condition_index (the declared order).
std::vector<std::string> condition_order(const std::vector<TrialRow>& rows);

/// Subjects x conditions matrix of `metric` over successful trials, pairing
/// rows by trial index. Every condition must retain the same set of at least
/// three trial indices; otherwise BalancedDesignError.
stats::ConditionMatrix build_matrix(const std::vector<TrialRow>& rows, std::string_view metric);

}  // namespace wattmark::orchestrator
