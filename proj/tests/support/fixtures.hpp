#pragma once

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wattmark/format.hpp"
#include "wattmark/stats/condition_matrix.hpp"

namespace wattmark::testing {

inline std::filesystem::path fixtures_dir() { return WATTMARK_FIXTURES; }
inline std::filesystem::path stats_fixture(const std::string& name) {
  return fixtures_dir() / "stats" / name;
}

inline nlohmann::json stats_reference() {
  std::ifstream in(stats_fixture("reference.json"));
  if (!in) throw std::runtime_error("missing stats reference.json");
  return nlohmann::json::parse(in);
}

inline std::vector<double> read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(wattmark::parse_double(line));
  }
  return out;
}

inline double rel_diff(double actual, double expected) {
  if (actual == expected) return 0.0;
  return std::fabs(actual - expected) / std::max(std::fabs(expected), 1e-300);
}

/// n x k matrix of independent normals plus a per-subject offset.
inline stats::ConditionMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                            double subject_sd = 1.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < k; ++j) labels.push_back("c" + std::to_string(j));
  std::vector<double> v(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const double offset = subject_sd * z(rng);
    for (std::size_t j = 0; j < k; ++j) v[i * k + j] = 10.0 + offset + z(rng);
  }
  return stats::ConditionMatrix(labels, n, std::move(v));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "wattmark-test") {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (prefix + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace wattmark::testing
