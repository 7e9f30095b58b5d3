#include "coopreg/error.hpp"

namespace coopreg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotConnected: return "NotConnected";
    case ErrorCode::kZeroEigenvalueMultiple: return "ZeroEigenvalueMultiple";
    case ErrorCode::kNoSolution: return "NoSolution";
    case ErrorCode::kNotStabilizable: return "NotStabilizable";
    case ErrorCode::kNotDetectable: return "NotDetectable";
    case ErrorCode::kNotObservable: return "NotObservable";
    case ErrorCode::kHamiltonianEigOnAxis: return "HamiltonianEigOnAxis";
    case ErrorCode::kNotStable: return "NotStable";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kPostCheckFailed: return "PostCheckFailed";
    case ErrorCode::kEtaBelowOpenLoopBound: return "EtaBelowOpenLoopBound";
    case ErrorCode::kIdenticalityViolated: return "IdenticalityViolated";
    case ErrorCode::kNominalNotHurwitz: return "NominalNotHurwitz";
    case ErrorCode::kGraphNotUndirected: return "GraphNotUndirected";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kSignalVanished: return "SignalVanished";
  }
  return "Unknown";
}

}  // namespace coopreg
