#pragma once

#include <cstdint>
#include <string>

#include "wattmark/power/power_trace.hpp"

namespace wattmark::metrics {

/// Model size. `ms_params()` is the parameter count in billions.
struct ModelSpec {
  std::int64_t param_count = 0;

  double ms_params() const noexcept { return static_cast<double>(param_count) / 1e9; }
};

/// Benchmark throughput constant and the dimensionless normalization K.
/// `cs_tflops` is configured (the higher of the measured FP16/BF16 rates);
/// the toolkit does not measure it.
struct ComputeSpec {
  double cs_tflops = 0.0;
  double k_norm = 1.0;
};

/// Tokens seen during training. `tt_tokens` is target_tokens * epochs in millions.
struct TokenExposure {
  std::int64_t target_tokens = 0;
  std::int64_t epochs = 0;
  double tt_tokens = 0.0;
  double tt_scale = 1.0;
};

TokenExposure token_exposure(std::int64_t target_tokens, std::int64_t epochs,
                             double tt_scale = 1.0);

/// exp(-eval_loss). Throws NumericDomainError when the loss is not finite or
/// perplexity over/underflows.
double inv_ppl(double eval_loss);

/// Power-free efficiency: invPPL / (TFLOPS * MS_params).
double pe_dissertation(double inv_ppl, double tflops_measured, double ms_params);

struct PeEnergyInputs {
  double inv_ppl = 0.0;
  double cs_tflops = 0.0;
  double tt_scale = 1.0;
  double ms_params = 0.0;
  double tt_tokens = 0.0;
  double rms_watts = 0.0;
  double k_norm = 1.0;
};

/// Energy-aware efficiency:
///   K * invPPL * CS_TFLOPS * TT_scale / (MS_params * TT_tokens * RMS(W))
double pe_energy(const PeEnergyInputs& in);

double tflops_per_watt(double cs_tflops, double rms_watts);

/// Relative shortfall against a fixed baseline: (baseline - pe) / baseline.
/// Negative means the trial beat the baseline.
double pe_loss(double pe, double pe_baseline);

struct TrialRecord {
  std::string trial_id;
  std::string condition;
  double eval_loss = 0.0;
  ModelSpec model;
  ComputeSpec compute;
  TokenExposure exposure;
  power::PowerTrace power;
};

struct EfficiencyReport {
  double inv_ppl = 0.0;
  double pe_dissertation = 0.0;
  double pe_energy = 0.0;
  double tflops_per_watt = 0.0;
  double pe_loss_vs_baseline = 0.0;
  double rms_watts = 0.0;
};

/// Composes the metrics above for one trial. Errors carry the trial id.
EfficiencyReport evaluate_trial(const TrialRecord& record, double pe_baseline);

}  // namespace wattmark::metrics
