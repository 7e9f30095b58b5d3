#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coopreg {

// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotConnected,
  kZeroEigenvalueMultiple,
  kNoSolution,
  kNotStabilizable,
  kNotDetectable,
  kNotObservable,
  kHamiltonianEigOnAxis,
  kNotStable,
  kInfeasible,
  kNumericalFailure,
  kPostCheckFailed,
  kEtaBelowOpenLoopBound,
  kIdenticalityViolated,
  kNominalNotHurwitz,
  kGraphNotUndirected,
  kParseError,
  kValidationError,
  kSignalVanished,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the SDP solver when no point achieves the requested margin.
// best_max_eigenvalue is the smallest max-eigenvalue the solver reached.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_max_eigenvalue)
      : Error(ErrorCode::kInfeasible, what),
        best_max_eigenvalue_(best_max_eigenvalue) {}

  double best_max_eigenvalue() const noexcept { return best_max_eigenvalue_; }

 private:
  double best_max_eigenvalue_;
};

}  // namespace coopreg
