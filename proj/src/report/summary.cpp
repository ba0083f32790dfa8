#include "wattmark/report/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wattmark/errors.hpp"

namespace wattmark::report {

Descriptives describe(std::span<const double> values) {
  Descriptives d;
  d.n = values.size();
  if (d.n == 0) throw NoDataError("no values to describe");
  double sum = 0.0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(d.n);
  double ss = 0.0;
  for (double v : values) ss += (v - d.mean) * (v - d.mean);
  d.sd = d.n > 1 ? std::sqrt(ss / static_cast<double>(d.n - 1))
                 : std::numeric_limits<double>::quiet_NaN();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  d.min = *lo;
  d.max = *hi;
  return d;
}

const Descriptives& SummaryTable::at(std::size_t condition, std::string_view metric) const {
  const auto it = std::find(metrics.begin(), metrics.end(), metric);
  if (it == metrics.end()) throw ContractViolation("metric not in summary: " + std::string(metric));
  return cells.at(condition).at(static_cast<std::size_t>(it - metrics.begin()));
}

const std::vector<std::string>& summary_metrics() {
  static const std::vector<std::string> m{"pe_energy", "rms_watts", "inv_ppl", "sample_count"};
  return m;
}

SummaryTable summarize(const std::vector<orchestrator::TrialRow>& rows,
                       const std::vector<std::string>& metrics) {
  SummaryTable t;
  t.metrics = metrics;
  for (const auto& label : orchestrator::condition_order(rows)) {
    std::vector<std::vector<double>> columns(metrics.size());
    for (const auto& r : rows) {
      if (!r.ok() || r.condition != label) continue;
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        columns[m].push_back(orchestrator::metric_value(r, metrics[m]));
      }
    }
    if (columns.empty() || columns.front().empty()) continue;  // every trial failed
    t.conditions.push_back(label);
    auto& cells = t.cells.emplace_back();
    for (const auto& col : columns) cells.push_back(describe(col));
  }
  if (t.conditions.empty()) throw NoDataError("results contain no successful trials");
  return t;
}

}  // namespace wattmark::report
