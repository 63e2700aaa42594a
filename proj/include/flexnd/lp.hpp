#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flexnd/oracles.hpp"
#include "flexnd/simplex.hpp"

namespace flexnd {

inline constexpr double kSeparationTol = 1e-7;

enum class RowClass { kFlexCapacity, kFlexCut, kBulkCut };

struct SeparatedRow {
  RowClass kind = RowClass::kFlexCut;
  LpRow row;
  int source = -1;        // requirement or scenario index
  VertexMask cut = 0;     // side without vertex n-1
  EdgeSet removed;        // B for flex cut rows, F_j for bulk rows
  double violation = 0.0; // rhs minus lhs at x
};

enum class FlexSeparation {
  kCutSweep,  // every cut, unsafe edges with the largest x taken as B
  kFlow,      // every B of at most q unsafe edges, min cut of G - B under x
};

// Capacity rows ((p+q) x on safe, p x on unsafe, at least p(p+q)) are
// checked first; cut-cover rows only when all of those hold. Returns the most
// violated row of the first class that has one, ties to the smaller cut mask.
std::optional<SeparatedRow> separate_flex(const FaultGraph& g,
                                          const std::vector<FlexRequirement>& reqs,
                                          const std::vector<double>& x,
                                          FlexSeparation method = FlexSeparation::kCutSweep,
                                          const Budgets& budgets = {});

// Per scenario and pair, a min cut of G \ F_j under x below 1.
std::optional<SeparatedRow> separate_bulk(const FaultGraph& g,
                                          const std::vector<BulkScenario>& omega,
                                          const std::vector<double>& x);

struct CuttingPlaneOptions {
  int max_rounds = 5000;
  FlexSeparation method = FlexSeparation::kCutSweep;
  Budgets budgets = Budgets::from_env();
};

struct LpRun {
  LinearProgramModel model;
  LpSolution solution;
  int rounds = 0;
};

// Starts from the bare bounds and adds one separated row per round until the
// oracle finds nothing. Throws kBudgetExceeded on hitting max_rounds or when
// the oracle returns a row already in the model.
LpRun solve_flex_lp(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                    const CuttingPlaneOptions& options = {});
LpRun solve_bulk_lp(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                    const CuttingPlaneOptions& options = {});

struct AugmentationCheck {
  bool valid = true;
  VertexMask witness = 0;   // violated cut with too little x outside F1
  double coverage = 0.0;    // its sum of x over delta(S) \ F1
  std::size_t cuts_checked = 0;
};

// Every cut violated with respect to f1 (a (p, q-1) solution) must carry at
// least 1 - kSeparationTol of x outside f1. Throws kBaseNotFeasible.
AugmentationCheck check_augmentation_lp_validity(const FaultGraph& g,
                                                 const std::vector<FlexRequirement>& reqs,
                                                 const std::vector<double>& x,
                                                 const EdgeSet& f1);

// s = 0, t = 1, v_i = 2..k+2. Per i, in this order: two unsafe s-v_i edges of
// cost 1/2 and one safe v_i-t edge of cost k+1. Requirement (1, k).
FaultGraph gap_instance(int k);
// 1 on unsafe edges, 2/(k+1) on safe edges.
std::vector<double> gap_fractional(const FaultGraph& g, int k);

struct GapOptions {
  int exact_up_to = 4;        // exact integral optimum for k at most this
  int lp_up_to = 8;           // cutting-plane LP optimum for k at most this
  Budgets budgets = Budgets::from_env();
};

struct GapReport {
  int k = 0;
  double fractional_cost = 0.0;
  bool fractional_clean = false;       // no separated row at the vector
  std::optional<double> lp_optimum;
  std::optional<double> exact_opt;
  int min_safe = 0;                    // ceil((k+1)/2)
  std::uint64_t candidates_rejected = 0;
  bool bound_certified = false;        // every candidate had its cut
  double integral_lower_bound = 0.0;   // min_safe * (k+1)
  double gap_lower_bound = 0.0;        // integral_lower_bound / fractional_cost
};

// Candidates are all unsafe edges plus a safe subset smaller than (k+1)/2;
// each gets the cut {s} u {v_i without its safe edge}, which must carry no
// safe edge and fewer than k+1 edges. Subsets of a candidate fail on the
// same cut, so this covers every solution with too few safe edges.
GapReport gap_experiment(int k, const GapOptions& options = {});

}  // namespace flexnd
