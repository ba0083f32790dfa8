#include "wattmark/power/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "wattmark/errors.hpp"
#include "wattmark/format.hpp"

namespace wattmark::power {
namespace {

constexpr std::string_view kHeader = "elapsed_ms,watts";

std::string line_field(std::size_t line_no) { return "line " + std::to_string(line_no); }

}  // namespace

void write_trace_csv(std::ostream& out, const PowerTrace& trace) {
  out << kHeader << '\n';
  for (const auto& s : trace.samples()) {
    out << s.elapsed_ms << ',' << format_roundtrip(s.watts) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const PowerTrace& trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  write_trace_csv(out, trace);
  if (!out) throw std::runtime_error("failed writing trace file " + path.string());
}

PowerTrace read_trace_csv(std::istream& in, std::string trial_id, double sample_interval_s) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw SchemaError("line 1", "trace file is empty");
  if (!line.empty() && line.back() == '\r') {
    throw SchemaError("line 1", "CRLF line endings are not allowed");
  }
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (line != kHeader) {
    throw SchemaError("line 1", "expected header '" + std::string(kHeader) + "', got '" + line + "'");
  }
  std::vector<PowerSample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.back() == '\r') throw SchemaError(line_field(line_no), "CRLF line endings are not allowed");
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw SchemaError(line_field(line_no), "expected two fields");
    }
    PowerSample s;
    const char* first = line.data();
    const char* mid = line.data() + comma;
    auto [ptr, ec] = std::from_chars(first, mid, s.elapsed_ms);
    if (ec != std::errc{} || ptr != mid) {
      throw SchemaError(line_field(line_no), "elapsed_ms is not an integer");
    }
    try {
      s.watts = parse_double(std::string_view(line).substr(comma + 1));
    } catch (const std::invalid_argument&) {
      throw SchemaError(line_field(line_no), "watts is not a number");
    }
    samples.push_back(s);
  }
  if (samples.empty()) throw InvalidTraceError("trace file has no samples");
  return PowerTrace::sealed_from(std::move(trial_id), sample_interval_s, std::move(samples));
}

PowerTrace read_trace_csv(const std::filesystem::path& path, std::string trial_id,
                          double sample_interval_s) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidTraceError("cannot open trace file " + path.string());
  return read_trace_csv(in, std::move(trial_id), sample_interval_s);
}

}  // namespace wattmark::power
