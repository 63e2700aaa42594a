#include "flexnd/problem.hpp"

namespace flexnd {

bool is_feasible(const FaultGraph& g, const Problem& problem, const EdgeSet& h,
                 const Budgets& budgets) {
  if (const auto* f = std::get_if<FlexProblem>(&problem)) {
    return is_flex_feasible(g, f->pairs, h).feasible;
  }
  if (const auto* b = std::get_if<BulkProblem>(&problem)) {
    return is_bulk_feasible(g, b->scenarios, h).feasible;
  }
  const auto& r = std::get<RelativeProblem>(problem);
  return is_rsndp_feasible(g, r.pairs, h, budgets).feasible;
}

std::string problem_kind(const Problem& problem) {
  switch (problem.index()) {
    case 0: return "flex_pairs";
    case 1: return "bulk_scenarios";
    default: return "rsndp_pairs";
  }
}

}  // namespace flexnd
