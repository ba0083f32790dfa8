#include "wattmark/report/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "wattmark/errors.hpp"
#include "wattmark/format.hpp"
#include "wattmark/orchestrator/experiment.hpp"
#include "wattmark/orchestrator/results.hpp"
#include "wattmark/power/sampler.hpp"
#include "wattmark/power/trace_csv.hpp"
#include "wattmark/report/render.hpp"
#include "wattmark/report/summary.hpp"

namespace wattmark::report {
namespace fs = std::filesystem;
using namespace wattmark::orchestrator;

namespace {

void route_logs_to_stderr() {
  if (!spdlog::get("wattmark")) {
    auto logger = spdlog::stderr_color_mt("wattmark");
    spdlog::set_default_logger(logger);
  }
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

struct RunFlags {
  std::string config;
  std::string backend;
  std::string results;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string metric = "pe_energy";
  std::vector<std::string> set;
};

struct AnalyzeFlags {
  std::string results;
  std::string metric = "pe_energy";
  std::optional<double> alpha;
  std::string out_dir;
};

fs::path results_from(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (auto e = env("WATTMARK_RESULTS")) return *e;
  throw ConfigError("no results file given (use --results or WATTMARK_RESULTS)");
}

double alpha_from(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (auto e = env("WATTMARK_ALPHA")) {
    try {
      return parse_double(*e);
    } catch (const std::invalid_argument&) {
      throw ConfigError("WATTMARK_ALPHA: expected a number, got '" + *e + "'");
    }
  }
  return stats::kDefaultAlpha;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
}

std::vector<std::string> with_metric(std::string metric) {
  auto metrics = summary_metrics();
  if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) {
    metrics.insert(metrics.begin(), std::move(metric));
  }
  return metrics;
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  Settings settings = load_settings_file(f.config);
  apply_environment(settings);
  if (!f.backend.empty()) settings["backend"] = f.backend;
  if (!f.results.empty()) settings["results"] = f.results;
  if (!f.out_dir.empty()) settings["output_dir"] = f.out_dir;
  if (f.seed) settings["seed"] = std::to_string(*f.seed);
  if (f.alpha) settings["alpha"] = format_roundtrip(*f.alpha);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    settings[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  const ExperimentConfig config = config_from_settings(settings);
  (void)metric_value(TrialRow{}, f.metric);

  const std::size_t total = config.conditions.size() * config.trials_per_condition;
  std::size_t done = 0;
  ExperimentHooks hooks;
  hooks.on_trial = [&](const TrialRow& r) {
    ++done;
    out << "[" << done << "/" << total << "] " << r.trial_id << ' ';
    if (r.ok()) {
      out << "ok  samples=" << r.sample_count
          << " rms_watts=" << format_significant(r.report.rms_watts, 6)
          << " pe_energy=" << format_significant(r.report.pe_energy, 6) << '\n';
    } else {
      out << "FAILED  " << r.reason << '\n';
    }
    out.flush();
  };

  const auto result = run_experiment(config, hooks);
  out << "\nresults: " << result.results_path.string() << '\n';

  int code = kExitOk;
  if (!result.failed_trials.empty()) {
    out << "failed trials (" << result.failed_trials.size() << "):";
    for (const auto& id : result.failed_trials) out << ' ' << id;
    out << '\n';
    code = kExitTrialFailures;
  }

  if (!result.analysis_error.empty()) {
    err << "analysis skipped: " << result.analysis_error << '\n';
    return code == kExitOk ? kExitAnalysis : code;
  }
  const auto bundle = stats::analyze(result.matrices.at(f.metric), config.alpha);
  const auto summary = summarize(result.rows, with_metric(f.metric));
  out << '\n' << render_text(f.metric, bundle, summary);
  write_analysis_csvs(config.output_dir / "report", f.metric, bundle);
  return code;
}

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out) {
  const fs::path results = results_from(f.results);
  const double alpha = alpha_from(f.alpha);
  check_alpha(alpha);
  const auto rows = read_results(results);
  const auto matrix = build_matrix(rows, f.metric);
  const auto bundle = stats::analyze(matrix, alpha);
  const auto summary = summarize(rows, with_metric(f.metric));
  out << render_text(f.metric, bundle, summary);

  const fs::path dir = f.out_dir.empty() ? results.parent_path() / "report" : fs::path(f.out_dir);
  out << '\n';
  for (const auto& p : write_analysis_csvs(dir, f.metric, bundle)) {
    out << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

int cmd_plotdata(const std::string& results_flag, const std::string& out_dir, std::ostream& out) {
  const fs::path results = results_from(results_flag);
  const auto rows = read_results(results);
  if (rows.empty()) throw NoDataError("results file '" + results.string() + "' has no trials");
  const auto summary = summarize(rows, metric_names());
  const fs::path dir = out_dir.empty() ? results.parent_path() / "plotdata" : fs::path(out_dir);
  for (const auto& p : write_plotdata(dir, summary)) out << "wrote " << p.string() << '\n';
  return kExitOk;
}

// Re-runs each stored trace through the replay backend and checks the
// sampler reproduces it and its RMS bit for bit (the results file holds the
// RMS at kReportDigits).
int cmd_replay_validate(const std::string& results_flag, std::ostream& out) {
  const fs::path results = results_from(results_flag);
  const auto rows = read_results(results);
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (const auto& r : rows) {
    if (r.trace.empty()) continue;
    const fs::path path = results.parent_path() / r.trace;
    const auto recorded = power::read_trace_csv(path, r.trial_id, r.sample_interval_s);
    std::vector<power::PowerSample> samples(recorded.samples().begin(), recorded.samples().end());
    const auto interval = power::interval_from_seconds(r.sample_interval_s);
    auto clock = std::make_shared<power::SimulatedClock>(
        power::ReplayBackend::horizon_for(samples, interval));
    auto backend = std::make_shared<power::ReplayBackend>(samples, clock, path.string());
    auto session = power::start_sampling(backend, clock,
                                         {.interval_s = r.sample_interval_s, .trial_id = r.trial_id});
    clock->settle();
    const auto replayed = session.stop_and_seal();

    ++checked;
    const double rms = power::rms_watts(replayed);
    std::string problem;
    if (!std::equal(replayed.samples().begin(), replayed.samples().end(), samples.begin(),
                    samples.end())) {
      problem = "replayed samples differ from the recorded trace";
    } else if (rms != power::rms_watts(recorded)) {
      problem = "replayed RMS differs from the recorded trace";
    } else if (r.ok() && round_significant(rms, kReportDigits) != r.report.rms_watts) {
      problem = "RMS " + format_roundtrip(rms) + " differs from stored " +
                format_roundtrip(r.report.rms_watts);
    }
    if (!problem.empty()) {
      ++mismatches;
      out << r.trial_id << ": " << problem << '\n';
    }
  }
  out << "replay-validate: " << checked << " traces, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitTrialFailures;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  route_logs_to_stderr();

  CLI::App app{"wattmark: GPU power profiling and energy-aware parameter efficiency"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  run_cmd->add_option("--config", run.config, "configuration file")->required();
  run_cmd->add_option("--backend", run.backend, "power backend: live, replay or synthetic");
  run_cmd->add_option("--results", run.results, "results file (JSONL)");
  run_cmd->add_option("--out-dir", run.out_dir, "output directory");
  run_cmd->add_option("--seed", run.seed, "experiment seed");
  run_cmd->add_option("--alpha", run.alpha, "significance level");
  run_cmd->add_option("--metric", run.metric, "metric for the closing analysis");
  run_cmd->add_option("--set", run.set, "override any config key: key=value");

  AnalyzeFlags analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "repeated-measures analysis of a results file");
  analyze_cmd->add_option("--results", analyze.results, "results file (JSONL)");
  analyze_cmd->add_option("--metric", analyze.metric, "metric to analyse");
  analyze_cmd->add_option("--alpha", analyze.alpha, "significance level");
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "directory for CSV tables");

  std::string plot_results;
  std::string plot_dir;
  auto* plot_cmd = app.add_subcommand("plotdata", "per-condition means and sds for every metric");
  plot_cmd->add_option("--results", plot_results, "results file (JSONL)");
  plot_cmd->add_option("--out-dir", plot_dir, "directory for the CSV files");

  std::string replay_results;
  auto* replay_cmd =
      app.add_subcommand("replay-validate", "check stored traces replay to identical RMS");
  replay_cmd->add_option("--results", replay_results, "results file (JSONL)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run, out, err);
    if (*analyze_cmd) return cmd_analyze(analyze, out);
    if (*plot_cmd) return cmd_plotdata(plot_results, plot_dir, out);
    if (*replay_cmd) return cmd_replay_validate(replay_results, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BalancedDesignError& e) {
    err << "unbalanced design: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const NoDataError& e) {
    err << "no data: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const DegenerateError& e) {
    err << "degenerate data: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const TooFewSamplesError& e) {
    err << "too few samples: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const SchemaError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace wattmark::report
