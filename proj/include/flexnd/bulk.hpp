#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "flexnd/oracles.hpp"

namespace flexnd {

// A spanning tree of G with parent pointers from a root, used to route every
// pair along its unique tree path.
struct TreeEmbedding {
  int root = 0;
  EdgeSet tree_edges;
  std::vector<int> parent;       // -1 at the root
  std::vector<int> parent_edge;  // -1 at the root
  std::vector<int> depth;
  double max_stretch = 1.0;      // over pairs with d_G > 0
  double mean_stretch = 1.0;

  // Edge ids of P_T(u, v).
  EdgeSet path(int u, int v) const;
};

// Dijkstra tree from a random root under costs scaled by 2^U, U uniform in
// [0, 1). Stretch statistics use the unscaled costs over all vertex pairs.
// Throws kDisconnected.
TreeEmbedding sample_tree(const FaultGraph& g, const std::vector<double>& costs,
                          std::uint64_t seed);

// Elements are candidate edges with their fundamental cycles {e} u P_T(e).
// Element j hits set i when the pair of set i is connected in
// (H u cycle_j) \ F_i.
struct HittingInstance {
  std::vector<ViolatingSet> sets;
  std::vector<int> elements;
  std::vector<double> element_cost;
  std::vector<EdgeSet> cycles;
  std::vector<std::vector<int>> hits;  // per element, increasing set indices

  std::size_t alpha() const;  // most sets hit by one element
  // Per set, the elements hitting it.
  std::vector<std::vector<int>> hitters() const;
};

// Elements are the edges outside H (cost c(e) + c(P_T(e))), plus, when
// include_h_edges is set, the edges of H (cost c(P_T(e))).
HittingInstance build_hitting_instance(const FaultGraph& g, const TreeEmbedding& tree,
                                       const EdgeSet& h, std::vector<ViolatingSet> sets,
                                       bool include_h_edges);

struct GreedyResult {
  std::vector<int> chosen;  // element indices in pick order
  double cost = 0.0;
};

// Repeatedly picks the element with the largest (newly hit sets)/cost, ties
// to the smaller element index. Throws kUnhittable naming the first set no
// element hits.
GreedyResult greedy_hitting_set(const HittingInstance& inst);

struct BulkLevel {
  int level = 0;
  std::uint64_t tree_seed = 0;
  double max_stretch = 1.0;
  double mean_stretch = 1.0;
  std::size_t sets = 0;
  std::size_t elements = 0;
  std::size_t alpha = 0;
  bool used_h_elements = false;
  double path_cost = 0.0;   // new edges from tree paths of terminal pairs
  double cycle_cost = 0.0;  // new edges from picked fundamental cycles
  double greedy_cost = 0.0; // element cost paid by the greedy hitting set
  EdgeSet edges;            // solution after the level (augment_bulk_levels)
};

using HittingHook = std::function<void(const HittingInstance&, const GreedyResult&)>;

struct BulkOptions {
  std::uint64_t seed = 1;
  int trees = 8;  // trees tried per level, cheapest result kept
  Budgets budgets = Budgets::from_env();
  HittingHook hook;
};

struct BulkResult {
  EdgeSet edges;
  double cost = 0.0;
  double base_cost = 0.0;   // flex driver: EC-SNDP base
  bool base_exact = false;
  std::vector<BulkLevel> levels;
};

// One augmentation level with a fixed tree: H_prev u H_P u picked cycles.
// Requires H_prev to survive every failure of fewer than `level` edges.
// Throws kInfeasibleAugmentation.
EdgeSet augment_bulk_with_tree(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                               const EdgeSet& h_prev, int level, const TreeEmbedding& tree,
                               const BulkOptions& options = {}, BulkLevel* record = nullptr);

EdgeSet augment_bulk(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                     const EdgeSet& h_prev, int level, std::uint64_t seed,
                     const BulkOptions& options = {}, BulkLevel* record = nullptr);

// Levels 1..max(width, 1) starting from `start`.
BulkResult augment_bulk_levels(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                               const EdgeSet& start, const BulkOptions& options = {});

// Throws kInfeasibleInstance when G itself fails some scenario.
BulkResult solve_bulk_sndp(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                           const BulkOptions& options = {});

// EC-SNDP base for the p_i, then for j = 1..max q_i one bulk augmentation over
// the expansion of the pairs with q_i >= j at (p_i, j).
BulkResult solve_flex_sndp(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                           const BulkOptions& options = {});

BulkResult solve_rsndp(const FaultGraph& g, const std::vector<RelativeRequirement>& reqs,
                       const BulkOptions& options = {});

}  // namespace flexnd
