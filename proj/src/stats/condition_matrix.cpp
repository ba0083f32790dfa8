#include "wattmark/stats/condition_matrix.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wattmark/errors.hpp"
#include "wattmark/format.hpp"

namespace wattmark::stats {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ConditionMatrix::ConditionMatrix(std::vector<std::string> labels, std::size_t subjects,
                                 std::vector<double> row_major)
    : labels_(std::move(labels)), n_(subjects), values_(std::move(row_major)) {
  if (labels_.size() < 2) throw ContractViolation("need at least 2 conditions");
  if (n_ < 3) throw ContractViolation("need at least 3 subjects, got " + std::to_string(n_));
  if (values_.size() != n_ * labels_.size()) {
    throw ContractViolation("matrix has " + std::to_string(values_.size()) + " cells, expected " +
                            std::to_string(n_ * labels_.size()));
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw ContractViolation("condition labels must be unique");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ContractViolation("matrix cells must be finite");
  }
}

ConditionMatrix ConditionMatrix::from_columns(std::vector<std::string> labels,
                                              const std::vector<std::vector<double>>& columns) {
  if (columns.size() != labels.size()) {
    throw ContractViolation("column count does not match label count");
  }
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) throw BalancedDesignError("columns have unequal lengths");
  }
  const std::size_t k = columns.size();
  std::vector<double> values(n * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) values[i * k + j] = columns[j][i];
  return ConditionMatrix(std::move(labels), n, std::move(values));
}

std::vector<double> ConditionMatrix::column(std::size_t condition) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)(i, condition);
  return out;
}

ConditionMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("line 1", "matrix file is empty");
  auto labels = split_csv(line);
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != labels.size()) {
      throw SchemaError("line " + std::to_string(line_no), "wrong number of fields");
    }
    for (const auto& f : fields) {
      try {
        values.push_back(parse_double(f));
      } catch (const std::invalid_argument&) {
        throw SchemaError("line " + std::to_string(line_no), "not a number: '" + f + "'");
      }
    }
    ++rows;
  }
  return ConditionMatrix(std::move(labels), rows, std::move(values));
}

ConditionMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const ConditionMatrix& matrix) {
  const auto& labels = matrix.labels();
  for (std::size_t j = 0; j < labels.size(); ++j) out << (j ? "," : "") << labels[j];
  out << '\n';
  for (std::size_t i = 0; i < matrix.subjects(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      out << (j ? "," : "") << format_roundtrip(matrix(i, j));
    }
    out << '\n';
  }
}

}  // namespace wattmark::stats
