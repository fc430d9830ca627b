#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monolab {

/// Failure categories surfaced by the library; the CLI maps them to exit codes.
enum class ErrorCode {
  InvalidDomain,
  InvalidCoefficient,
  InvalidWeight,
  InvalidSpec,
  InvalidInput,
  InvalidCenter,
  ConvergenceFailure,
  SingularOperator,
  ResolutionError,
  Unlocatable,
  IllConditioned,
  OverflowGuard,
  NumericalError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Newton failure keeps the residual history of the run for inspection.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residual_history)
      : Error(ErrorCode::ConvergenceFailure, what),
        residual_history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  std::vector<double> residual_history_;
};

}  // namespace monolab
