#include "wattmark/orchestrator/experiment.hpp"

#include <spdlog/spdlog.h>

#include "wattmark/errors.hpp"
#include "wattmark/orchestrator/sidecar.hpp"
#include "wattmark/orchestrator/workload.hpp"
#include "wattmark/power/sampler.hpp"
#include "wattmark/power/trace_csv.hpp"

namespace wattmark::orchestrator {
namespace fs = std::filesystem;

namespace {

std::string relative_to(const fs::path& target, const fs::path& base_dir) {
  auto rel = fs::absolute(target).lexically_normal().lexically_relative(
      fs::absolute(base_dir).lexically_normal());
  return (rel.empty() ? target : rel).generic_string();
}

}  // namespace

TrialRow run_trial(const ExperimentConfig& config, std::size_t condition_index,
                   std::size_t trial_index, const ExperimentHooks& hooks) {
  const std::int64_t target = config.conditions.at(condition_index);
  TrialContext ctx{condition_index, trial_index, target, trial_id(target, trial_index),
                   trial_seed(config.seed, condition_index, trial_index)};

  TrialRow row;
  row.trial_id = ctx.trial_id;
  row.condition = config.condition_label(condition_index);
  row.condition_index = condition_index;
  row.trial_index = trial_index;
  row.target_tokens = target;
  row.epochs = config.epochs;
  row.seed = ctx.seed;
  row.backend = std::string(power::to_string(config.backend));
  row.sample_interval_s = config.sample_interval_s;

  const fs::path sidecar = config.output_dir / "sidecars" / (ctx.trial_id + ".json");
  const fs::path trace_path = config.output_dir / "traces" / (ctx.trial_id + ".csv");
  const fs::path log_path = config.output_dir / "logs" / (ctx.trial_id + ".log");
  fs::create_directories(sidecar.parent_path());
  fs::remove(sidecar);
  fs::remove(trace_path);
  fs::remove(log_path);

  const std::string command =
      expand_command(config.workload, {{"target_tokens", std::to_string(target)},
                                       {"epochs", std::to_string(config.epochs)},
                                       {"seed", std::to_string(ctx.seed)},
                                       {"sidecar_path", sidecar.string()}});

  auto telemetry = (hooks.telemetry ? hooks.telemetry : make_default_telemetry)(config, ctx);
  // The startup sample is taken here, before the workload exists.
  auto session = power::start_sampling(telemetry.backend, telemetry.clock,
                                       {.interval_s = config.sample_interval_s,
                                        .trial_id = ctx.trial_id});
  row.workload_start_ms = session.elapsed_ms();

  int exit_code = 0;
  try {
    exit_code = run_shell_command(command, log_path);
  } catch (...) {
    telemetry.clock->settle();
    session.stop_and_seal();
    throw;
  }
  telemetry.clock->settle();
  row.skipped_reads = session.skipped_reads();
  auto trace = session.stop_and_seal();
  row.skipped_reads = session.skipped_reads();

  power::write_trace_csv(trace_path, trace);
  row.trace = relative_to(trace_path, config.results_path().parent_path());
  row.sample_count = trace.size();

  if (exit_code != 0) {
    row.status = "failed";
    row.reason = "workload exited with status " + std::to_string(exit_code) + " (log: " +
                 log_path.string() + ")";
    return row;
  }

  row.workload = ingest_sidecar(sidecar, target, config.epochs);

  metrics::TrialRecord record{
      .trial_id = ctx.trial_id,
      .condition = row.condition,
      .eval_loss = row.workload.eval_loss,
      .model = {row.workload.param_count},
      .compute = {config.cs_tflops, config.k_norm},
      .exposure = metrics::token_exposure(target, config.epochs, config.tt_scale),
      .power = std::move(trace),
  };
  row.report = rounded_report(metrics::evaluate_trial(record, config.baseline_pe));
  row.ms_params = record.model.ms_params();
  row.tt_tokens = record.exposure.tt_tokens;
  row.tt_scale = config.tt_scale;
  row.cs_tflops = config.cs_tflops;
  row.k_norm = config.k_norm;
  row.baseline_pe = config.baseline_pe;
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks) {
  validate(config);
  ExperimentResult result;
  result.results_path = config.results_path();
  ResultsWriter writer(result.results_path);

  for (std::size_t c = 0; c < config.conditions.size(); ++c) {
    for (std::size_t t = 0; t < static_cast<std::size_t>(config.trials_per_condition); ++t) {
      TrialRow row;
      try {
        row = run_trial(config, c, t, hooks);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        const std::int64_t target = config.conditions[c];
        row.trial_id = trial_id(target, t);
        row.condition = config.condition_label(c);
        row.condition_index = c;
        row.trial_index = t;
        row.target_tokens = target;
        row.epochs = config.epochs;
        row.seed = trial_seed(config.seed, c, t);
        row.backend = std::string(power::to_string(config.backend));
        row.sample_interval_s = config.sample_interval_s;
        row.status = "failed";
        row.reason = e.what();
        const fs::path trace_path = config.output_dir / "traces" / (row.trial_id + ".csv");
        if (fs::exists(trace_path)) {
          row.trace = relative_to(trace_path, result.results_path.parent_path());
        }
      }
      if (!row.ok()) {
        spdlog::warn("trial {} failed: {}", row.trial_id, row.reason);
        result.failed_trials.push_back(row.trial_id);
      }
      writer.append(row);
      if (hooks.on_trial) hooks.on_trial(row);
      result.rows.push_back(std::move(row));
    }
  }

  // Matrices come from the rows as persisted, so analysis of the file agrees.
  const auto persisted = read_results(result.results_path);
  try {
    for (const auto& metric : metric_names()) {
      result.matrices.emplace(metric, build_matrix(persisted, metric));
    }
    result.analysis = stats::analyze(result.matrices.at("pe_energy"), config.alpha);
  } catch (const Error& e) {
    result.analysis_error = e.what();
  }
  return result;
}

}  // namespace wattmark::orchestrator
