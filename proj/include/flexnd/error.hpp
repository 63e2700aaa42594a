#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flexnd {

enum class ErrorKind {
  kInvalidGraph,
  kInvalidArgument,
  kSourceEqualsSink,
  kInfeasibleDemand,
  kNonIntegralFlow,
  kBaseNotFeasible,
  kPriorLevelNotSatisfied,
  kWidthBudgetExceeded,
  kEnumerationTooLarge,
  kUncoverable,
  kNotRingFamily,
  kUnsupportedParameters,
  kInfeasibleInstance,
  kStageCoverFailed,
  kParameterConditionViolated,
  kDisconnected,
  kInfeasibleAugmentation,
  kUnhittable,
  kLpInfeasible,
  kLpUnbounded,
  kBudgetExceeded,
  kCannotSatisfyFeasibility,
  kParseError,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this exception; callers branch on
// kind() rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flexnd
