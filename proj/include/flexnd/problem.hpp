#pragma once

#include <string>
#include <variant>
#include <vector>

#include "flexnd/oracles.hpp"

namespace flexnd {

struct FlexProblem {
  std::vector<FlexRequirement> pairs;
};

struct BulkProblem {
  std::vector<BulkScenario> scenarios;
};

struct RelativeProblem {
  std::vector<RelativeRequirement> pairs;
};

using Problem = std::variant<FlexProblem, BulkProblem, RelativeProblem>;

// Dispatches to the matching feasibility oracle.
bool is_feasible(const FaultGraph& g, const Problem& problem, const EdgeSet& h,
                 const Budgets& budgets = {});

std::string problem_kind(const Problem& problem);

}  // namespace flexnd
