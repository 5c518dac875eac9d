#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzybeta {

// Invalid argument domain (m outside (0,1), negative precision, y on the boundary...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Row-indexed domain error raised while evaluating a per-observation quantity.
class RowDomainError : public DomainError {
public:
  RowDomainError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

// Adaptive integration ran out of its subdivision budget.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double estimate_;
  double error_estimate_;
};

// Nonlinear solver failure; carries the residual-norm trace.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, std::vector<double> residual_trace)
      : std::runtime_error(what), trace_(std::move(residual_trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

private:
  std::vector<double> trace_;
};

class RankDeficientError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InferenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConversionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace fuzzybeta
