#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flexnd/cut_family.hpp"

namespace flexnd {

struct CoverResult {
  EdgeSet edges;
  double dual_lower_bound = 0.0;  // sum of grown duals
  std::vector<int> added;         // growth order
  std::vector<int> deleted;       // removed by reverse delete, in removal order
};

// Synchronized dual growth on the minimal violated sets, one tight edge per
// event (smallest id on ties), then reverse delete. Only ground edges are
// used. Throws kUncoverable when a member has no ground edge on its boundary.
CoverResult primal_dual_cover(const CutFamily& fam, const std::vector<double>& costs);

struct RingCover {
  EdgeSet edges;
  double cost = 0.0;
  double lp_bound = 0.0;
  bool lp_integral = false;  // the LP optimum alone certified optimality
};

// Minimum-cost cover of a ring family. The covering LP over all members is
// solved first; an integral optimum is returned directly, otherwise an exact
// branch-and-bound settles it. Throws kNotRingFamily if the closure
// properties fail and kUncoverable if some member cannot be covered.
RingCover ring_cover_exact(const CutFamily& fam, const std::vector<double>& costs);

using CutPair = std::pair<VertexMask, VertexMask>;

// (A u B, A n B both members) or (A - B, B - A both members).
bool uncrosses(const CutFamily& fam, VertexMask a, VertexMask b);

// First properly intersecting member pair that fails to uncross, or nothing.
std::optional<CutPair> check_uncrossable(const CutFamily& fam);

// First properly intersecting pair whose union or intersection is missing;
// a pair with a == b reports two distinct minimal members.
std::optional<CutPair> check_ring_family(const CutFamily& fam);

struct HittingResult {
  std::vector<int> chosen;  // element indices, increasing
  double cost = 0.0;
  std::uint64_t nodes = 0;
};

// Exact minimum-cost hitting set: choose elements so every set (a list of
// element indices) contains one. Branch and bound with a node budget; throws
// kBudgetExceeded or kUncoverable (an empty set).
HittingResult exact_hitting_set(const std::vector<std::vector<int>>& sets,
                                const std::vector<double>& element_cost,
                                std::uint64_t node_budget = 20'000'000);

// Exact minimum-cost cover of any family over its ground set.
EdgeSet exact_cover(const CutFamily& fam, const std::vector<double>& costs,
                    std::uint64_t node_budget = 20'000'000);

}  // namespace flexnd
