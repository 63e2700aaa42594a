#pragma once

#include <string>
#include <vector>

namespace flexnd {

// sum_j coef * x[var] >= rhs
struct LpRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  std::string tag;  // which constraint class produced the row
};

// min c.x subject to the rows and 0 <= x <= 1.
struct LinearProgramModel {
  std::vector<double> cost;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(cost.size()); }
  // Adds the row unless an identical one exists; returns true when added.
  bool add_row(LpRow row);
  // One constraint per line: ">= rhs  coef*x_id ..." preceded by the objective.
  std::string dump() const;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

// Dense tableau simplex run on the dual (the dual of a min problem with
// non-negative costs has the origin as a feasible basis). Dantzig pricing,
// switching to Bland's rule after 1000 consecutive degenerate pivots.
// Throws kLpInfeasible when the rows cannot be met inside the unit box.
LpSolution solve_lp(const LinearProgramModel& model);

}  // namespace flexnd
