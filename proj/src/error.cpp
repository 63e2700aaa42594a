#include "flexnd/error.hpp"

namespace flexnd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGraph: return "InvalidGraph";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kSourceEqualsSink: return "SourceEqualsSink";
    case ErrorKind::kInfeasibleDemand: return "InfeasibleDemand";
    case ErrorKind::kNonIntegralFlow: return "NonIntegralFlow";
    case ErrorKind::kBaseNotFeasible: return "BaseNotFeasible";
    case ErrorKind::kPriorLevelNotSatisfied: return "PriorLevelNotSatisfied";
    case ErrorKind::kWidthBudgetExceeded: return "WidthBudgetExceeded";
    case ErrorKind::kEnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::kUncoverable: return "Uncoverable";
    case ErrorKind::kNotRingFamily: return "NotRingFamily";
    case ErrorKind::kUnsupportedParameters: return "UnsupportedParameters";
    case ErrorKind::kInfeasibleInstance: return "InfeasibleInstance";
    case ErrorKind::kStageCoverFailed: return "StageCoverFailed";
    case ErrorKind::kParameterConditionViolated: return "ParameterConditionViolated";
    case ErrorKind::kDisconnected: return "Disconnected";
    case ErrorKind::kInfeasibleAugmentation: return "InfeasibleAugmentation";
    case ErrorKind::kUnhittable: return "Unhittable";
    case ErrorKind::kLpInfeasible: return "LpInfeasible";
    case ErrorKind::kLpUnbounded: return "LpUnbounded";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kCannotSatisfyFeasibility: return "CannotSatisfyFeasibility";
    case ErrorKind::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace flexnd
