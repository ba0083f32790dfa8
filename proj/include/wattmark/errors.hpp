#pragma once

#include <stdexcept>
#include <string>

namespace wattmark {

/// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (non-positive factor, unsealed trace, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Sealing a trace or session a second time.
class AlreadySealedError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A value left the range where the arithmetic is meaningful (exp overflow, NaN loss).
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// The power backend could not be reached or failed a read.
class TelemetryError : public Error {
 public:
  using Error::Error;
};

/// A trace without samples, or one that breaks the sample ordering rules.
class InvalidTraceError : public Error {
 public:
  using Error::Error;
};

class TooFewSamplesError : public Error {
 public:
  using Error::Error;
};

/// Zero-variance sample, singular contrast covariance, or a pair with constant differences.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed structured input. `field()` names the offending field path when known.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Well-formed input that breaks the workload protocol (e.g. fewer true tokens than targeted).
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Analysis needs equal retained trial counts per condition, at least 3 each.
class BalancedDesignError : public Error {
 public:
  using Error::Error;
};

class NoDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace wattmark
