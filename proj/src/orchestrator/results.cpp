#include "wattmark/orchestrator/results.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "wattmark/errors.hpp"
#include "wattmark/format.hpp"

namespace wattmark::orchestrator {
namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + key, "required field is missing");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(where + key, "wrong type");
  }
}

}  // namespace

metrics::EfficiencyReport rounded_report(const metrics::EfficiencyReport& r) {
  const auto round = [](double v) { return round_significant(v, kReportDigits); };
  return {round(r.inv_ppl),         round(r.pe_dissertation), round(r.pe_energy),
          round(r.tflops_per_watt), round(r.pe_loss_vs_baseline), round(r.rms_watts)};
}

std::string encode_row(const TrialRow& r) {
  ojson j;
  j["trial_id"] = r.trial_id;
  j["condition"] = r.condition;
  j["condition_index"] = r.condition_index;
  j["trial_index"] = r.trial_index;
  j["target_tokens"] = r.target_tokens;
  j["epochs"] = r.epochs;
  j["seed"] = r.seed;
  j["status"] = r.status;
  if (!r.ok()) j["reason"] = r.reason;
  j["backend"] = r.backend;
  j["sample_interval_s"] = r.sample_interval_s;
  if (!r.trace.empty()) {
    j["trace"] = r.trace;
    j["sample_count"] = r.sample_count;
    j["skipped_reads"] = r.skipped_reads;
    j["workload_start_ms"] = r.workload_start_ms;
  }
  if (r.ok()) {
    const auto& w = r.workload;
    j["eval_loss"] = w.eval_loss;
    j["true_tokens"] = w.true_tokens;
    j["epochs_completed"] = w.epochs_completed;
    j["skipped_batches"] = w.skipped_batches;
    j["param_count"] = w.param_count;
    j["eval_source"] = std::string(to_string(w.eval_source));
    j["ms_params"] = r.ms_params;
    j["tt_tokens"] = r.tt_tokens;
    j["tt_scale"] = r.tt_scale;
    j["cs_tflops"] = r.cs_tflops;
    j["k_norm"] = r.k_norm;
    j["baseline_pe"] = r.baseline_pe;
    j["rms_watts"] = r.report.rms_watts;
    j["inv_ppl"] = r.report.inv_ppl;
    j["pe_dissertation"] = r.report.pe_dissertation;
    j["pe_energy"] = r.report.pe_energy;
    j["tflops_per_watt"] = r.report.tflops_per_watt;
    j["pe_loss"] = r.report.pe_loss_vs_baseline;
  }
  return j.dump();
}

TrialRow decode_row(std::string_view line, std::size_t line_no) {
  const std::string where = line_no ? "line " + std::to_string(line_no) + ": " : "";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError(where.empty() ? "" : where.substr(0, where.size() - 2),
                      std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("", where + "expected a JSON object");

  TrialRow r;
  r.trial_id = get<std::string>(j, "trial_id", where);
  r.condition = get<std::string>(j, "condition", where);
  r.condition_index = get<std::size_t>(j, "condition_index", where);
  r.trial_index = get<std::size_t>(j, "trial_index", where);
  r.target_tokens = get<std::int64_t>(j, "target_tokens", where);
  r.epochs = get<std::int64_t>(j, "epochs", where);
  r.seed = get<std::uint64_t>(j, "seed", where);
  r.status = get<std::string>(j, "status", where);
  if (r.status != "ok" && r.status != "failed") {
    throw SchemaError(where + "status", "expected 'ok' or 'failed'");
  }
  r.backend = get<std::string>(j, "backend", where);
  r.sample_interval_s = get<double>(j, "sample_interval_s", where);
  if (!r.ok()) r.reason = get<std::string>(j, "reason", where);
  if (j.contains("trace") || r.ok()) {
    r.trace = get<std::string>(j, "trace", where);
    r.sample_count = get<std::size_t>(j, "sample_count", where);
    r.skipped_reads = get<std::size_t>(j, "skipped_reads", where);
    r.workload_start_ms = get<std::int64_t>(j, "workload_start_ms", where);
  }
  if (r.ok()) {
    auto& w = r.workload;
    w.eval_loss = get<double>(j, "eval_loss", where);
    w.true_tokens = get<std::int64_t>(j, "true_tokens", where);
    w.epochs_completed = get<std::int64_t>(j, "epochs_completed", where);
    w.skipped_batches = get<std::int64_t>(j, "skipped_batches", where);
    w.param_count = get<std::int64_t>(j, "param_count", where);
    try {
      w.eval_source = eval_source_from_string(get<std::string>(j, "eval_source", where));
    } catch (const SchemaError& e) {
      throw SchemaError(where + "eval_source", e.what());
    }
    r.ms_params = get<double>(j, "ms_params", where);
    r.tt_tokens = get<double>(j, "tt_tokens", where);
    r.tt_scale = get<double>(j, "tt_scale", where);
    r.cs_tflops = get<double>(j, "cs_tflops", where);
    r.k_norm = get<double>(j, "k_norm", where);
    r.baseline_pe = get<double>(j, "baseline_pe", where);
    r.report.rms_watts = get<double>(j, "rms_watts", where);
    r.report.inv_ppl = get<double>(j, "inv_ppl", where);
    r.report.pe_dissertation = get<double>(j, "pe_dissertation", where);
    r.report.pe_energy = get<double>(j, "pe_energy", where);
    r.report.tflops_per_watt = get<double>(j, "tflops_per_watt", where);
    r.report.pe_loss_vs_baseline = get<double>(j, "pe_loss", where);
  }
  return r;
}

ResultsWriter::ResultsWriter(const std::filesystem::path& path) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw ConfigError("cannot write results file '" + path.string() + "'");
}

void ResultsWriter::append(const TrialRow& row) {
  out_ << encode_row(row) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("write to '" + path_.string() + "' failed");
}

std::vector<TrialRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read results file '" + path.string() + "'");
  std::vector<TrialRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(decode_row(line, line_no));
  }
  return rows;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"pe_energy",       "pe_dissertation", "inv_ppl",
                                              "tflops_per_watt", "pe_loss",         "rms_watts",
                                              "sample_count",    "eval_loss"};
  return names;
}

double metric_value(const TrialRow& r, std::string_view metric) {
  if (metric == "pe_energy") return r.report.pe_energy;
  if (metric == "pe_dissertation") return r.report.pe_dissertation;
  if (metric == "inv_ppl") return r.report.inv_ppl;
  if (metric == "tflops_per_watt") return r.report.tflops_per_watt;
  if (metric == "pe_loss") return r.report.pe_loss_vs_baseline;
  if (metric == "rms_watts") return r.report.rms_watts;
  if (metric == "sample_count") return static_cast<double>(r.sample_count);
  if (metric == "eval_loss") return r.workload.eval_loss;
  throw ConfigError("unknown metric '" + std::string(metric) + "'");
}

std::vector<std::string> condition_order(const std::vector<TrialRow>& rows) {
  std::vector<std::pair<std::size_t, std::string>> seen;
  for (const auto& r : rows) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& s) { return s.second == r.condition; });
    if (it == seen.end()) {
      seen.emplace_back(r.condition_index, r.condition);
    } else if (it->first != r.condition_index) {
      throw SchemaError("condition_index", "condition " + r.condition +
                                               " appears with two different indices");
    }
  }
  std::stable_sort(seen.begin(), seen.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> order;
  for (auto& s : seen) order.push_back(std::move(s.second));
  return order;
}

stats::ConditionMatrix build_matrix(const std::vector<TrialRow>& rows, std::string_view metric) {
  (void)metric_value(TrialRow{}, metric);  // reject unknown names before anything else
  const auto labels = condition_order(rows);
  if (labels.empty()) throw NoDataError("results contain no trials");
  if (labels.size() < 2) throw BalancedDesignError("analysis needs at least 2 conditions");

  std::vector<std::map<std::size_t, double>> by_condition(labels.size());
  for (const auto& r : rows) {
    if (!r.ok()) continue;
    const auto j = static_cast<std::size_t>(
        std::find(labels.begin(), labels.end(), r.condition) - labels.begin());
    if (!by_condition[j].emplace(r.trial_index, metric_value(r, metric)).second) {
      throw SchemaError("trial_index", "duplicate trial index " + std::to_string(r.trial_index) +
                                           " in condition " + r.condition);
    }
  }

  std::set<std::size_t> reference;
  for (const auto& [i, _] : by_condition.front()) reference.insert(i);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    std::set<std::size_t> indices;
    for (const auto& [i, _] : by_condition[j]) indices.insert(i);
    if (indices != reference) {
      throw BalancedDesignError("condition " + labels[j] + " retains " +
                                std::to_string(indices.size()) +
                                " trials with different trial indices than condition " +
                                labels.front() + " (" + std::to_string(reference.size()) +
                                "); rows are paired by trial index");
    }
  }
  if (reference.size() < 3) {
    throw BalancedDesignError("each condition needs at least 3 retained trials, have " +
                              std::to_string(reference.size()));
  }

  std::vector<double> values;
  values.reserve(reference.size() * labels.size());
  for (std::size_t i : reference) {
    for (std::size_t j = 0; j < labels.size(); ++j) values.push_back(by_condition[j].at(i));
  }
  return stats::ConditionMatrix(labels, reference.size(), std::move(values));
}

}  // namespace wattmark::orchestrator
