#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace wattmark::orchestrator {

/// Where the workload's evaluation loss came from. Perplexity is normally
/// measured on the default prompt; the fallback prompt and a training batch
/// are recovery paths when that evaluation is non-finite.
enum class EvalSource { default_prompt, fallback_prompt, training_batch };

std::string_view to_string(EvalSource source);
EvalSource eval_source_from_string(std::string_view name);  // SchemaError on unknown

/// The JSON object a workload writes to {sidecar_path} when it finishes.
/// Keys are exactly the field names below; unknown keys are rejected.
struct WorkloadResult {
  double eval_loss = 0.0;
  std::int64_t true_tokens = 0;
  std::int64_t epochs_completed = 0;
  std::int64_t skipped_batches = 0;
  std::int64_t param_count = 0;
  EvalSource eval_source = EvalSource::default_prompt;

  friend bool operator==(const WorkloadResult&, const WorkloadResult&) = default;
};

/// Schema validation only. Throws SchemaError naming the field.
WorkloadResult parse_sidecar(std::string_view json_text);

/// Protocol rules: true_tokens >= target and epochs_completed == epochs.
/// Throws ProtocolViolation.
void check_protocol(const WorkloadResult& result, std::int64_t target_tokens,
                    std::int64_t epochs);

/// Reads, validates and checks a sidecar file. A missing file is a SchemaError.
WorkloadResult ingest_sidecar(const std::filesystem::path& path, std::int64_t target_tokens,
                              std::int64_t epochs);

std::string sidecar_json(const WorkloadResult& result);

/// Writes to a temporary sibling and renames it over `path`.
void write_sidecar_atomic(const std::filesystem::path& path, const WorkloadResult& result);

}  // namespace wattmark::orchestrator
