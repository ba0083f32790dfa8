#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wattmark::stats {

/// n subjects x k conditions of one metric, fully crossed.
///
/// Row i holds subject i's value under every condition. Storage is row-major.
/// Invariants: n >= 3, k >= 2, labels unique, every cell finite.
class ConditionMatrix {
 public:
  ConditionMatrix(std::vector<std::string> labels, std::size_t subjects,
                  std::vector<double> row_major);

  static ConditionMatrix from_columns(std::vector<std::string> labels,
                                      const std::vector<std::vector<double>>& columns);

  std::size_t subjects() const noexcept { return n_; }
  std::size_t conditions() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double operator()(std::size_t subject, std::size_t condition) const {
    return values_[subject * labels_.size() + condition];
  }
  std::span<const double> row(std::size_t subject) const {
    return {values_.data() + subject * labels_.size(), labels_.size()};
  }
  std::vector<double> column(std::size_t condition) const;
  std::span<const double> values() const noexcept { return values_; }

  /// Returns a copy with f applied to every cell as f(subject, condition, value).
  template <typename F>
  ConditionMatrix transformed(F&& f) const {
    std::vector<double> out(values_.size());
    const std::size_t k = labels_.size();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < k; ++j) out[i * k + j] = f(i, j, values_[i * k + j]);
    return ConditionMatrix(labels_, n_, std::move(out));
  }

 private:
  std::vector<std::string> labels_;
  std::size_t n_;
  std::vector<double> values_;
};

// CSV form: header row of condition labels, then one row per subject.
ConditionMatrix read_matrix_csv(std::istream& in);
ConditionMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(std::ostream& out, const ConditionMatrix& matrix);

}  // namespace wattmark::stats
