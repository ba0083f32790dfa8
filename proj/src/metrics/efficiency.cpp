#include "wattmark/metrics/efficiency.hpp"

#include <cmath>
#include <string>

#include "wattmark/errors.hpp"

namespace wattmark::metrics {
namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ContractViolation(std::string(name) + " must be positive and finite, got " +
                            std::to_string(value));
  }
}

double require_finite_result(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw NumericDomainError(std::string(what) + " is not representable");
  }
  return value;
}

}  // namespace

TokenExposure token_exposure(std::int64_t target_tokens, std::int64_t epochs, double tt_scale) {
  if (target_tokens <= 0) {
    throw ContractViolation("target_tokens must be positive, got " + std::to_string(target_tokens));
  }
  if (epochs <= 0) throw ContractViolation("epochs must be positive, got " + std::to_string(epochs));
  require_positive(tt_scale, "tt_scale");
  // The product is exact in int64 for any realistic token count, so the only
  // rounding is the single division.
  const double total = static_cast<double>(target_tokens * epochs);
  return {target_tokens, epochs, total / 1e6, tt_scale};
}

double inv_ppl(double eval_loss) {
  if (!std::isfinite(eval_loss)) {
    throw NumericDomainError("evaluation loss is not finite");
  }
  const double perplexity = std::exp(eval_loss);
  if (!std::isfinite(perplexity) || perplexity <= 0.0) {
    throw NumericDomainError("perplexity exp(" + std::to_string(eval_loss) +
                             ") is not representable");
  }
  return require_finite_result(1.0 / perplexity, "inverse perplexity");
}

double pe_dissertation(double inv_ppl, double tflops_measured, double ms_params) {
  require_positive(inv_ppl, "inv_ppl");
  require_positive(tflops_measured, "tflops_measured");
  require_positive(ms_params, "ms_params");
  return require_finite_result(inv_ppl / (tflops_measured * ms_params), "pe_dissertation");
}

double pe_energy(const PeEnergyInputs& in) {
  require_positive(in.inv_ppl, "inv_ppl");
  require_positive(in.cs_tflops, "cs_tflops");
  require_positive(in.tt_scale, "tt_scale");
  require_positive(in.ms_params, "ms_params");
  require_positive(in.tt_tokens, "tt_tokens");
  require_positive(in.rms_watts, "rms_watts");
  require_positive(in.k_norm, "k_norm");
  const double numerator = in.k_norm * in.inv_ppl * in.cs_tflops * in.tt_scale;
  const double denominator = in.ms_params * in.tt_tokens * in.rms_watts;
  return require_finite_result(numerator / denominator, "pe_energy");
}

double tflops_per_watt(double cs_tflops, double rms_watts) {
  require_positive(cs_tflops, "cs_tflops");
  require_positive(rms_watts, "rms_watts");
  return cs_tflops / rms_watts;
}

double pe_loss(double pe, double pe_baseline) {
  require_positive(pe_baseline, "pe_baseline");
  if (!std::isfinite(pe)) throw ContractViolation("pe must be finite");
  return (pe_baseline - pe) / pe_baseline;
}

EfficiencyReport evaluate_trial(const TrialRecord& record, double pe_baseline) {
  const auto with_id = [&](const std::exception& e) {
    return "trial '" + record.trial_id + "': " + e.what();
  };
  try {
    if (!record.power.sealed()) {
      throw ContractViolation("power trace is not sealed");
    }
    EfficiencyReport r;
    r.rms_watts = power::rms_watts(record.power);
    r.inv_ppl = inv_ppl(record.eval_loss);
    const double ms = record.model.ms_params();
    r.pe_dissertation = pe_dissertation(r.inv_ppl, record.compute.cs_tflops, ms);
    r.pe_energy = pe_energy({.inv_ppl = r.inv_ppl,
                             .cs_tflops = record.compute.cs_tflops,
                             .tt_scale = record.exposure.tt_scale,
                             .ms_params = ms,
                             .tt_tokens = record.exposure.tt_tokens,
                             .rms_watts = r.rms_watts,
                             .k_norm = record.compute.k_norm});
    r.tflops_per_watt = tflops_per_watt(record.compute.cs_tflops, r.rms_watts);
    r.pe_loss_vs_baseline = pe_loss(r.pe_energy, pe_baseline);
    return r;
  } catch (const ContractViolation& e) {
    throw ContractViolation(with_id(e));
  } catch (const NumericDomainError& e) {
    throw NumericDomainError(with_id(e));
  }
}

}  // namespace wattmark::metrics
