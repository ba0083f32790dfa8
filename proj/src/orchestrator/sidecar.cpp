#include "wattmark/orchestrator/sidecar.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "wattmark/errors.hpp"

namespace wattmark::orchestrator {
namespace {

using nlohmann::json;

constexpr const char* kKeys[] = {"eval_loss",       "true_tokens",   "epochs_completed",
                                 "skipped_batches", "param_count",   "eval_source"};

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(key, "required field is missing");
  return *it;
}

std::int64_t integer_field(const json& obj, const char* key, std::int64_t min_value) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw SchemaError(key, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw SchemaError(key, "integer out of range");
  }
  const auto x = v.get<std::int64_t>();
  if (x < min_value) {
    throw SchemaError(key, "must be at least " + std::to_string(min_value) + ", got " +
                               std::to_string(x));
  }
  return x;
}

}  // namespace

std::string_view to_string(EvalSource source) {
  switch (source) {
    case EvalSource::default_prompt: return "default-prompt";
    case EvalSource::fallback_prompt: return "fallback-prompt";
    case EvalSource::training_batch: return "training-batch";
  }
  return "default-prompt";
}

EvalSource eval_source_from_string(std::string_view name) {
  if (name == "default-prompt") return EvalSource::default_prompt;
  if (name == "fallback-prompt") return EvalSource::fallback_prompt;
  if (name == "training-batch") return EvalSource::training_batch;
  throw SchemaError("eval_source", "unknown value '" + std::string(name) + "'");
}

WorkloadResult parse_sidecar(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("sidecar is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "sidecar must be a JSON object");

  const std::set<std::string> known(std::begin(kKeys), std::end(kKeys));
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw SchemaError(key, "unknown field");
  }

  WorkloadResult r;
  const json& loss = field(doc, "eval_loss");
  if (!loss.is_number()) throw SchemaError("eval_loss", "expected a number");
  r.eval_loss = loss.get<double>();
  if (!std::isfinite(r.eval_loss)) throw SchemaError("eval_loss", "must be finite");

  r.true_tokens = integer_field(doc, "true_tokens", 1);
  r.epochs_completed = integer_field(doc, "epochs_completed", 1);
  r.skipped_batches = integer_field(doc, "skipped_batches", 0);
  r.param_count = integer_field(doc, "param_count", 1);

  const json& source = field(doc, "eval_source");
  if (!source.is_string()) throw SchemaError("eval_source", "expected a string");
  r.eval_source = eval_source_from_string(source.get<std::string>());
  return r;
}

void check_protocol(const WorkloadResult& r, std::int64_t target_tokens, std::int64_t epochs) {
  if (r.true_tokens < target_tokens) {
    throw ProtocolViolation("true_tokens " + std::to_string(r.true_tokens) +
                            " is below the target " + std::to_string(target_tokens));
  }
  if (r.epochs_completed != epochs) {
    throw ProtocolViolation("epochs_completed " + std::to_string(r.epochs_completed) +
                            " differs from the configured " + std::to_string(epochs));
  }
}

WorkloadResult ingest_sidecar(const std::filesystem::path& path, std::int64_t target_tokens,
                              std::int64_t epochs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "sidecar '" + path.string() + "' is missing or unreadable");
  std::ostringstream buf;
  buf << in.rdbuf();
  WorkloadResult r = parse_sidecar(buf.str());
  check_protocol(r, target_tokens, epochs);
  return r;
}

std::string sidecar_json(const WorkloadResult& r) {
  nlohmann::ordered_json j;
  j["eval_loss"] = r.eval_loss;
  j["true_tokens"] = r.true_tokens;
  j["epochs_completed"] = r.epochs_completed;
  j["skipped_batches"] = r.skipped_batches;
  j["param_count"] = r.param_count;
  j["eval_source"] = std::string(to_string(r.eval_source));
  return j.dump() + "\n";
}

void write_sidecar_atomic(const std::filesystem::path& path, const WorkloadResult& result) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << sidecar_json(result);
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wattmark::orchestrator
