#include "wattmark/orchestrator/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>

#include "wattmark/errors.hpp"
#include "wattmark/format.hpp"

namespace wattmark::orchestrator {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    const double v = parse_double(text);
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key + " must be positive");
  return v;
}

double non_negative(const std::string& key, double v) {
  if (v < 0.0) throw ConfigError(key + " must not be negative");
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::filesystem::path ExperimentConfig::results_path() const {
  return results.empty() ? output_dir / "results.jsonl" : results;
}

std::string ExperimentConfig::condition_label(std::size_t condition_index) const {
  return std::to_string(conditions.at(condition_index));
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys{
      {"conditions", "comma-separated token targets, one per condition (required)"},
      {"trials_per_condition", "trials run under each condition (default 50, minimum 3)"},
      {"epochs", "training epochs per trial, passed to the workload (default 3)"},
      {"sample_interval_s", "seconds between power samples (default 60)"},
      {"backend", "power source: live, replay or synthetic (default synthetic)"},
      {"device_index", "GPU index for the live backend (default 0)"},
      {"replay_dir", "directory of <trial_id>.csv traces for the replay backend"},
      {"synthetic_base_watts", "synthetic power level at zero tokens (default 150)"},
      {"synthetic_watts_per_mtoken", "synthetic power increase per million tokens (default 4)"},
      {"synthetic_noise_watts", "standard deviation of synthetic read noise (default 2)"},
      {"synthetic_seconds_per_mtoken", "simulated trial seconds per million tokens (default 400)"},
      {"synthetic_duration_jitter", "relative sd of simulated trial duration (default 0.02)"},
      {"synthetic_read_failure_rate", "probability a synthetic read fails after startup (default 0)"},
      {"workload", "workload command template (required)"},
      {"cs_tflops", "benchmark TFLOPS constant (required)"},
      {"k_norm", "normalization constant K (default 1)"},
      {"tt_scale", "dimensionless token scale TT_scale (default 1)"},
      {"baseline_pe", "fixed baseline for PE loss (default 1)"},
      {"alpha", "significance level for every test (default 0.05)"},
      {"output_dir", "directory for traces, sidecars and logs (default wattmark-out)"},
      {"results", "results file (default <output_dir>/results.jsonl)"},
      {"seed", "experiment seed (default 0)"},
  };
  return keys;
}

Settings parse_settings(std::istream& in, const std::string& source_name) {
  std::set<std::string> known;
  for (const auto& [k, _] : config_keys()) known.insert(k);

  Settings out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

Settings load_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse_settings(in, path.string());
}

void apply_environment(Settings& settings) {
  for (const auto& [key, _] : config_keys()) {
    std::string env = "WATTMARK_";
    for (char c : key) env.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (const char* v = std::getenv(env.c_str()); v != nullptr && *v != '\0') settings[key] = v;
  }
}

ExperimentConfig config_from_settings(const Settings& s) {
  std::set<std::string> known;
  for (const auto& [k, _] : config_keys()) known.insert(k);
  for (const auto& [k, _] : s) {
    if (!known.contains(k)) throw ConfigError("unknown key '" + k + "'");
  }

  ExperimentConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const auto* v = get(key);
    if (v == nullptr || v->empty()) throw ConfigError("missing required key '" + key + "'");
    return *v;
  };

  {
    const auto& text = require("conditions");
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = std::min(text.find(',', pos), text.size());
      const auto item = trim(std::string_view(text).substr(pos, comma - pos));
      if (item.empty()) throw ConfigError("conditions: empty entry");
      c.conditions.push_back(parse_int<std::int64_t>("conditions", item));
      pos = comma + 1;
    }
  }
  if (const auto* v = get("trials_per_condition")) c.trials_per_condition = parse_int<int>("trials_per_condition", *v);
  if (const auto* v = get("epochs")) c.epochs = parse_int<int>("epochs", *v);
  if (const auto* v = get("sample_interval_s")) c.sample_interval_s = positive("sample_interval_s", parse_real("sample_interval_s", *v));
  if (const auto* v = get("backend")) c.backend = power::backend_kind_from_string(*v);
  if (const auto* v = get("device_index")) c.device_index = parse_int<unsigned>("device_index", *v);
  if (const auto* v = get("replay_dir")) c.replay_dir = *v;

  auto& syn = c.synthetic;
  if (const auto* v = get("synthetic_base_watts")) syn.base_watts = positive("synthetic_base_watts", parse_real("synthetic_base_watts", *v));
  if (const auto* v = get("synthetic_watts_per_mtoken")) syn.watts_per_mtoken = non_negative("synthetic_watts_per_mtoken", parse_real("synthetic_watts_per_mtoken", *v));
  if (const auto* v = get("synthetic_noise_watts")) syn.noise_watts = non_negative("synthetic_noise_watts", parse_real("synthetic_noise_watts", *v));
  if (const auto* v = get("synthetic_seconds_per_mtoken")) syn.seconds_per_mtoken = positive("synthetic_seconds_per_mtoken", parse_real("synthetic_seconds_per_mtoken", *v));
  if (const auto* v = get("synthetic_duration_jitter")) syn.duration_jitter = non_negative("synthetic_duration_jitter", parse_real("synthetic_duration_jitter", *v));
  if (const auto* v = get("synthetic_read_failure_rate")) syn.read_failure_rate = non_negative("synthetic_read_failure_rate", parse_real("synthetic_read_failure_rate", *v));

  c.workload = require("workload");
  c.cs_tflops = positive("cs_tflops", parse_real("cs_tflops", require("cs_tflops")));
  if (const auto* v = get("k_norm")) c.k_norm = positive("k_norm", parse_real("k_norm", *v));
  if (const auto* v = get("tt_scale")) c.tt_scale = positive("tt_scale", parse_real("tt_scale", *v));
  if (const auto* v = get("baseline_pe")) c.baseline_pe = positive("baseline_pe", parse_real("baseline_pe", *v));
  if (const auto* v = get("alpha")) c.alpha = parse_real("alpha", *v);
  if (const auto* v = get("output_dir")) c.output_dir = *v;
  if (const auto* v = get("results")) c.results = *v;
  if (const auto* v = get("seed")) c.seed = parse_int<std::uint64_t>("seed", *v);

  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.conditions.size() < 2) {
    throw ConfigError("at least 2 conditions are required, got " +
                      std::to_string(c.conditions.size()));
  }
  std::set<std::int64_t> seen;
  for (auto t : c.conditions) {
    if (t <= 0) throw ConfigError("condition token targets must be positive");
    if (!seen.insert(t).second) throw ConfigError("duplicate condition " + std::to_string(t));
  }
  if (c.trials_per_condition < 3) throw ConfigError("trials_per_condition must be at least 3");
  if (c.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(c.sample_interval_s > 0.0)) throw ConfigError("sample_interval_s must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (!(c.cs_tflops > 0.0)) throw ConfigError("cs_tflops must be positive");
  if (c.workload.empty()) throw ConfigError("workload command is empty");
  if (c.backend == power::BackendKind::replay && c.replay_dir.empty()) {
    throw ConfigError("backend 'replay' needs replay_dir");
  }
  if (c.synthetic.read_failure_rate >= 1.0) {
    throw ConfigError("synthetic_read_failure_rate must be below 1");
  }
}

std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t condition_index,
                         std::size_t trial_index) {
  std::uint64_t x = splitmix64(experiment_seed);
  x = splitmix64(x ^ (0xA24BAED4963EE407ULL * (condition_index + 1)));
  x = splitmix64(x ^ (0x9FB21C651E98DF25ULL * (trial_index + 1)));
  return x & 0x7FFFFFFFULL;  // workloads often want a 31-bit seed
}

std::string trial_id(std::int64_t target_tokens, std::size_t trial_index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld_%03zu", static_cast<long long>(target_tokens), trial_index);
  return buf;
}

}  // namespace wattmark::orchestrator
