#pragma once

#include <cstdint>
#include <optional>

#include "flexnd/problem.hpp"

namespace flexnd {

struct ExactResult {
  EdgeSet edges;
  double cost = 0.0;
  std::uint64_t nodes = 0;
};

// Provably minimum-cost feasible edge set. Branch and bound over edges: each
// node picks the violated constraint with the fewest remaining candidate
// edges and branches on which candidate is added first; the bound adds the
// cheapest edges any completion must still buy. Relative problems are solved
// through their bulk expansion.
// Throws kBudgetExceeded (too many edges or nodes) and kInfeasibleInstance.
ExactResult exact_solve(const FaultGraph& g, const Problem& problem,
                        const Budgets& budgets = Budgets::from_env(),
                        std::optional<double> upper_bound = std::nullopt);

}  // namespace flexnd
