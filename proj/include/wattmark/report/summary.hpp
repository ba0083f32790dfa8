#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wattmark/orchestrator/results.hpp"

namespace wattmark::report {

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< sample sd (n - 1); NaN when n < 2
  double min = 0.0;
  double max = 0.0;
};

Descriptives describe(std::span<const double> values);

/// Per-condition descriptives of successful trials, conditions in results order.
struct SummaryTable {
  std::vector<std::string> conditions;
  std::vector<std::string> metrics;
  std::vector<std::vector<Descriptives>> cells;  ///< [condition][metric]

  const Descriptives& at(std::size_t condition, std::string_view metric) const;
};

/// PE (energy), RMS watts, invPPL and sample count.
const std::vector<std::string>& summary_metrics();

/// Throws NoDataError when there are no successful trials.
SummaryTable summarize(const std::vector<orchestrator::TrialRow>& rows,
                       const std::vector<std::string>& metrics = summary_metrics());

}  // namespace wattmark::report
