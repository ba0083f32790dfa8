#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wattmark/report/summary.hpp"
#include "wattmark/stats/analysis.hpp"

namespace wattmark::report {

/// Aligned plain-text report: descriptives, normality table, sphericity line,
/// ANOVA line and pairwise table. Test statistics carry 4 decimals and p
/// values below 0.001 print as "<0.001".
std::string render_text(const std::string& metric, const stats::AnalysisBundle& bundle,
                        const SummaryTable& summary);

// Machine-readable forms at full (round-trip) precision.
std::string normality_csv(const stats::AnalysisBundle& bundle);
std::string sphericity_csv(const stats::AnalysisBundle& bundle);
std::string anova_csv(const stats::AnalysisBundle& bundle);
/// Columns: pair,t,p_raw,p_corrected,reject
std::string pairwise_csv(const stats::AnalysisBundle& bundle);

/// Writes <metric>_{normality,sphericity,anova,pairwise}.csv; returns the paths.
std::vector<std::filesystem::path> write_analysis_csvs(const std::filesystem::path& dir,
                                                       const std::string& metric,
                                                       const stats::AnalysisBundle& bundle);

/// condition,mean,sd,n for one metric of the summary.
std::string plotdata_csv(const SummaryTable& summary, const std::string& metric);

/// Writes <metric>.csv for every metric of the summary; returns the paths.
std::vector<std::filesystem::path> write_plotdata(const std::filesystem::path& dir,
                                                  const SummaryTable& summary);

/// "a vs b"
std::string pair_label(const stats::PairwiseResult& r);

}  // namespace wattmark::report
