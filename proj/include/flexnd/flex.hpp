#pragma once

#include <functional>
#include <span>
#include <vector>

#include "flexnd/cut_family.hpp"
#include "flexnd/flow.hpp"
#include "flexnd/oracles.hpp"

namespace flexnd {

// How one augmentation round (p, q-1) -> (p, q) of FGC is split.
//  stages empty: a single family holding every violated cut.
//  otherwise: stage i covers the violated cuts with exactly i safe edges of
//  the current solution on their boundary, for the listed i in order.
struct StagePlan {
  int p = 1;
  int q = 1;
  std::vector<int> stages;
  bool staged() const { return !stages.empty(); }
};

// Throws kUnsupportedParameters outside the pairs where every family is
// known to be uncrossable: p <= 2 (p = 1 needs q <= 3), q = 1, q in {2, 3},
// and q = 4 for even p.
StagePlan plan_stages(int p, int q);

struct StageEvent {
  int level = 0;          // the q being reached
  int stage = -1;         // safe count, -1 for a single family
  std::vector<int> paths; // Flex-ST: indices of Q in the path bundle
  const CutFamily* family = nullptr;
  const EdgeSet* before = nullptr;  // solution at the start of the stage
  EdgeSet added;
  double dual_lower_bound = 0.0;    // primal-dual covers only
};
using StageHook = std::function<void(const StageEvent&)>;

struct StageRecord {
  int level = 0;
  int stage = -1;
  int families = 0;        // covers computed (1 for FGC stages)
  std::size_t members = 0; // violated cuts at the start of the stage
  double cost = 0.0;       // cost of the edges the stage added
};

struct FlexOptions {
  Budgets budgets = Budgets::from_env();
  bool exact_base = true;  // (p,0) base by exact search when m is in budget
  StageHook hook;
};

struct FlexResult {
  EdgeSet edges;
  double cost = 0.0;
  double base_cost = 0.0;
  bool base_exact = false;
  double guarantee = 0.0;  // ratio this run provably stays within
  std::vector<StageRecord> stages;
};

// Augments an FGC solution from (p, q-1) to (p, q) following `plan`.
// Throws kBaseNotFeasible and kStageCoverFailed.
EdgeSet augment_stages(const FaultGraph& g, const EdgeSet& f, const StagePlan& plan,
                       const FlexOptions& options = {},
                       std::vector<StageRecord>* log = nullptr);

// (p,0)-FGC: p-edge-connected spanning subgraph. Exact when m is within the
// exact budget (and exact_base is set), otherwise p rounds of primal-dual
// edge-connectivity augmentation.
EdgeSet solve_fgc_base(const FaultGraph& g, int p, const FlexOptions& options,
                       bool* exact = nullptr);

// Throws kUnsupportedParameters and kInfeasibleInstance.
FlexResult solve_fgc(const FaultGraph& g, int p, int q, const FlexOptions& options = {});

// Unit s-t paths of an integral flow, with their edge sets.
struct PathBundle {
  int source = 0;
  int sink = 1;
  std::vector<UnitPath> paths;
  std::vector<EdgeSet> edge_sets;

  static PathBundle from_flow(const FaultGraph& g, const Flow& f);
  std::size_t size() const { return paths.size(); }
};

// A is an s-side cut, violated for (p, q) under f_i, and the paths listed in
// `q_paths` each meet delta_{f_i}(A) in exactly one edge; those edges are
// distinct, safe, and make up A's whole safe boundary.
bool membership_CiQ(const FaultGraph& g, const EdgeSet& f_i, int p, int q,
                    const PathBundle& bundle, std::span<const int> q_paths, VertexMask a);

// Cheapest edge set carrying p(p+q) units with capacity p+q on safe and p on
// unsafe edges (min-cost flow support), together with that flow.
struct CapSeed {
  EdgeSet edges;
  Flow flow;
};
CapSeed cap_st_seed(const FaultGraph& g, int s, int t, int safe_cap, int unsafe_cap,
                    int demand);

// (p,q)-Flex-ST. Requires 2(p+q) > pq (kParameterConditionViolated).
// Throws kInfeasibleInstance, kNotRingFamily, kStageCoverFailed.
FlexResult solve_flex_st(const FaultGraph& g, int s, int t, int p, int q,
                         const FlexOptions& options = {});

// (2,2)-Flex-ST from a 4-unit seed (safe capacity 2, unsafe 1) plus exact
// covers of the three ring families keyed by the first three paths.
FlexResult solve_flex_st_22(const FaultGraph& g, int s, int t,
                            const FlexOptions& options = {});

// Ratios the implementation provably keeps (exact base counts as 1, the
// primal-dual edge-connectivity base as 2 per level).
double fgc_guarantee(int p, int q, bool exact_base);
double flex_st_guarantee(int p, int q);
inline constexpr double kFlexSt22Guarantee = 5.0;

// Published ceilings for FGC: 2q+2 for p = 2, 4 for q = 1, 2p+4 for q = 2,
// 4p+4 for q = 3, 6p+4 for q = 4 and even p; 2 for q = 0. The smallest
// applicable one is returned; 0 when none applies.
double fgc_published_ratio(int p, int q);

}  // namespace flexnd
