#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wattmark/power/power_trace.hpp"

namespace wattmark::power {

// Trace file format: UTF-8 CSV, LF line endings, header `elapsed_ms,watts`,
// one row per sample. Watts are written in shortest round-trip form, so a
// trace read back holds bit-identical values.

void write_trace_csv(std::ostream& out, const PowerTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace);

/// Parses and validates a trace file into a sealed trace. Throws SchemaError
/// naming the line for malformed rows and InvalidTraceError for rule breaks.
PowerTrace read_trace_csv(std::istream& in, std::string trial_id, double sample_interval_s);
PowerTrace read_trace_csv(const std::filesystem::path& path, std::string trial_id,
                          double sample_interval_s);

}  // namespace wattmark::power
