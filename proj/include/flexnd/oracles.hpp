#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flexnd/cut_family.hpp"
#include "flexnd/graph.hpp"

namespace flexnd {

struct FlexRequirement {
  int s = 0;
  int t = 1;
  int p = 1;
  int q = 0;
};

using TerminalPair = std::pair<int, int>;

struct BulkScenario {
  EdgeSet fail;
  std::vector<TerminalPair> pairs;
};

struct RelativeRequirement {
  int s = 0;
  int t = 1;
  int r = 1;
};

// Enumeration limits. Exceeding one is a hard error, never a silent cut-off.
struct Budgets {
  std::uint64_t enumeration = 5'000'000;  // subsets / scenarios enumerated
  int exact_max_edges = 30;
  std::uint64_t exact_nodes = 50'000'000;  // branch-and-bound nodes

  // Defaults overridden by FLEXND_ENUM_BUDGET, FLEXND_EXACT_MAX_EDGES and
  // FLEXND_EXACT_NODE_BUDGET when set.
  static Budgets from_env();
};

// Every vertex pair with the same (p, q): the spanning (FGC) variant.
std::vector<FlexRequirement> all_pairs_requirement(int n, int p, int q);

// A cut is fine for a requirement when it keeps p safe edges or p+q edges in
// total, i.e. it survives the loss of any q unsafe edges with p edges left.
constexpr bool flex_cut_ok(CutCounts c, int p, int q) {
  return c.safe >= p || c.total() >= p + q;
}

void validate(const FaultGraph& g, const std::vector<FlexRequirement>& reqs);
void validate(const FaultGraph& g, const std::vector<BulkScenario>& omega);
void validate(const FaultGraph& g, const std::vector<RelativeRequirement>& reqs);

struct FlexWitness {
  int requirement = -1;  // index into reqs
  VertexMask cut = 0;    // oriented to contain the requirement's s
  EdgeSet removed;       // B: unsafe edges whose deletion leaves < p edges
};

struct FlexCheck {
  bool feasible = true;
  std::optional<FlexWitness> witness;
};

enum class FlexMethod {
  kCutSweep,  // every cut of (V, H), Gray-code order; n <= 24
  kFlow,      // every B of min(q, |U cap H|) unsafe edges, unit max flow in H - B
};

FlexCheck is_flex_feasible(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                           const EdgeSet& h, FlexMethod method = FlexMethod::kCutSweep);

struct BulkWitness {
  int scenario = -1;
  int pair = -1;
};

struct BulkCheck {
  bool feasible = true;
  std::optional<BulkWitness> witness;
};

BulkCheck is_bulk_feasible(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                           const EdgeSet& h);

struct RelativeWitness {
  int requirement = -1;
  EdgeSet failed;
};

struct RelativeCheck {
  bool feasible = true;
  std::optional<RelativeWitness> witness;
};

// Enumerates failure sets F inside H only: a violating F outside H shrinks to
// F cap H, which is still violating. Throws kEnumerationTooLarge.
RelativeCheck is_rsndp_feasible(const FaultGraph& g,
                                const std::vector<RelativeRequirement>& reqs,
                                const EdgeSet& h, const Budgets& budgets = {});

// Cuts that separate a pair i with fewer than p_i safe edges and exactly
// p_i + q_i - 1 edges of F1 on the boundary. Single-pair requirements give a
// source-side family, otherwise both orientations are kept. The ground set is
// E \ F1. Throws kBaseNotFeasible when F1 misses (p_i, q_i - 1).
CutFamily violated_cuts_flex_aug(const FaultGraph& g,
                                 const std::vector<FlexRequirement>& reqs,
                                 const EdgeSet& f1);

struct ViolatingSet {
  EdgeSet failed;
  TerminalPair pair;
  friend bool operator==(const ViolatingSet&, const ViolatingSet&) = default;
};

// All (F, uv) with F inside some F_j, |F| = level, and uv in K_j cut apart in
// H \ F. Identical F from different scenarios are merged. Sorted by (F, pair).
// Throws kPriorLevelNotSatisfied if H misses some scenario of size < level.
std::vector<ViolatingSet> violating_edge_sets_bulk(const FaultGraph& g,
                                                   const std::vector<BulkScenario>& omega,
                                                   const EdgeSet& h, int level,
                                                   const Budgets& budgets = {});

// width = max |F_j|
int bulk_width(const std::vector<BulkScenario>& omega);

// Scenario per failure set F with |F cap S| <= p_i - 1 and |F| <= p_i + q_i - 1
// for some pair; K_F lists those pairs. Throws kWidthBudgetExceeded.
std::vector<BulkScenario> expand_flex_to_bulk(const FaultGraph& g,
                                              const std::vector<FlexRequirement>& reqs,
                                              const Budgets& budgets = {});

// Scenario per F with |F| <= max r - 1: pairs with r_i > |F| still connected in
// G - F. Scenarios without pairs are dropped. Throws kWidthBudgetExceeded.
std::vector<BulkScenario> expand_rsndp_to_bulk(const FaultGraph& g,
                                               const std::vector<RelativeRequirement>& reqs,
                                               const Budgets& budgets = {});

// Calls fn(F) for each subset of `pool` with exactly k elements, in
// lexicographic order of sorted ids. fn returns false to stop early.
void for_each_subset(const std::vector<int>& pool, int k, std::size_t universe,
                     const std::function<bool(const EdgeSet&)>& fn);

// sum_{i <= k} C(n, i), saturating.
std::uint64_t count_subsets_up_to(int n, int k);
std::uint64_t binomial(int n, int k);

}  // namespace flexnd
