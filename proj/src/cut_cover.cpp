#include "flexnd/cut_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "flexnd/error.hpp"
#include "flexnd/simplex.hpp"

namespace flexnd {

namespace {

constexpr double kTightTol = 1e-9;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

CoverResult primal_dual_cover(const CutFamily& fam, const std::vector<double>& costs) {
  const FaultGraph& g = fam.graph();
  CoverResult result;
  result.edges = g.empty_set();
  std::vector<double> slack(costs);
  while (true) {
    const auto active = fam.minimal_violated(result.edges);
    if (active.empty()) break;
    std::vector<int> hits(idx(g.num_edges()), 0);
    for (VertexMask s : active) {
      const EdgeSet cand = boundary(g, fam.ground(), s) - result.edges;
      if (cand.empty()) {
        throw Error(ErrorKind::kUncoverable,
                    "member with no candidate edge on its boundary");
      }
      cand.for_each([&](int id) { ++hits[idx(id)]; });
    }
    double step = std::numeric_limits<double>::infinity();
    for (int id = 0; id < g.num_edges(); ++id) {
      if (hits[idx(id)] > 0) step = std::min(step, slack[idx(id)] / hits[idx(id)]);
    }
    int tight = -1;
    for (int id = 0; id < g.num_edges() && tight < 0; ++id) {
      if (hits[idx(id)] > 0 && slack[idx(id)] / hits[idx(id)] <= step + kTightTol) tight = id;
    }
    for (int id = 0; id < g.num_edges(); ++id) {
      if (hits[idx(id)] > 0) {
        slack[idx(id)] = std::max(0.0, slack[idx(id)] - step * hits[idx(id)]);
      }
    }
    slack[idx(tight)] = 0.0;
    result.dual_lower_bound += step * static_cast<double>(active.size());
    result.edges.insert(tight);
    result.added.push_back(tight);
  }
  for (auto it = result.added.rbegin(); it != result.added.rend(); ++it) {
    EdgeSet without = result.edges;
    without.erase(*it);
    if (fam.covered_by(without)) {
      result.edges = std::move(without);
      result.deleted.push_back(*it);
    }
  }
  return result;
}

bool uncrosses(const CutFamily& fam, VertexMask a, VertexMask b) {
  return (fam.contains(a | b) && fam.contains(a & b)) ||
         (fam.contains(a & ~b) && fam.contains(b & ~a));
}

std::optional<CutPair> check_uncrossable(const CutFamily& fam) {
  const auto& m = fam.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!properly_intersect(m[i], m[j])) continue;
      if (!uncrosses(fam, m[i], m[j])) return CutPair{m[i], m[j]};
    }
  }
  return std::nullopt;
}

std::optional<CutPair> check_ring_family(const CutFamily& fam) {
  const auto& m = fam.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!properly_intersect(m[i], m[j])) continue;
      if (!fam.contains(m[i] | m[j]) || !fam.contains(m[i] & m[j])) {
        return CutPair{m[i], m[j]};
      }
    }
  }
  std::vector<VertexMask> minimal;
  for (VertexMask s : m) {
    const bool has_smaller = std::any_of(m.begin(), m.end(), [&](VertexMask t) {
      return t != s && (t & ~s) == 0;
    });
    if (!has_smaller) minimal.push_back(s);
  }
  if (minimal.size() > 1) return CutPair{minimal[0], minimal[1]};
  return std::nullopt;
}

namespace {

struct HittingSearch {
  const std::vector<std::vector<int>>& sets;
  const std::vector<double>& cost;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::vector<char> chosen;
  std::vector<char> excluded;
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> best_choice;

  bool hit(const std::vector<int>& set) const {
    return std::any_of(set.begin(), set.end(), [&](int e) { return chosen[idx(e)] != 0; });
  }

  void run(double so_far) {
    if (++nodes > budget) {
      throw Error(ErrorKind::kBudgetExceeded, "hitting-set search exceeded its node budget");
    }
    const std::vector<int>* branch = nullptr;
    std::size_t branch_size = 0;
    double bound = so_far;
    for (const auto& set : sets) {
      if (hit(set)) continue;
      std::size_t avail = 0;
      double cheapest = std::numeric_limits<double>::infinity();
      for (int e : set) {
        if (excluded[idx(e)]) continue;
        ++avail;
        cheapest = std::min(cheapest, cost[idx(e)]);
      }
      if (avail == 0) return;
      bound = std::max(bound, so_far + cheapest);
      if (branch == nullptr || avail < branch_size) {
        branch = &set;
        branch_size = avail;
      }
    }
    if (branch == nullptr) {
      if (so_far < best - 1e-12) {
        best = so_far;
        best_choice = chosen;
      }
      return;
    }
    if (bound >= best - 1e-12) return;
    std::vector<int> order;
    for (int e : *branch) {
      if (!excluded[idx(e)]) order.push_back(e);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return cost[idx(a)] != cost[idx(b)] ? cost[idx(a)] < cost[idx(b)] : a < b;
    });
    std::vector<int> newly_excluded;
    for (int e : order) {
      chosen[idx(e)] = 1;
      run(so_far + cost[idx(e)]);
      chosen[idx(e)] = 0;
      excluded[idx(e)] = 1;
      newly_excluded.push_back(e);
    }
    for (int e : newly_excluded) excluded[idx(e)] = 0;
  }
};

}  // namespace

HittingResult exact_hitting_set(const std::vector<std::vector<int>>& sets,
                                const std::vector<double>& element_cost,
                                std::uint64_t node_budget) {
  for (const auto& s : sets) {
    if (s.empty()) throw Error(ErrorKind::kUncoverable, "empty set cannot be hit");
  }
  HittingSearch search{sets, element_cost, node_budget, 0, {}, {}, std::numeric_limits<double>::infinity(), {}};
  search.chosen.assign(element_cost.size(), 0);
  search.excluded.assign(element_cost.size(), 0);

  // Greedy start gives the search an incumbent.
  {
    std::vector<char> pick(element_cost.size(), 0);
    std::vector<char> done(sets.size(), 0);
    double total = 0.0;
    while (true) {
      std::vector<int> gain(element_cost.size(), 0);
      bool open = false;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        if (done[i]) continue;
        open = true;
        for (int e : sets[i]) ++gain[idx(e)];
      }
      if (!open) break;
      int best = -1;
      for (std::size_t e = 0; e < element_cost.size(); ++e) {
        if (gain[e] == 0) continue;
        const int ei = static_cast<int>(e);
        if (best < 0 || gain[e] * element_cost[idx(best)] > gain[idx(best)] * element_cost[e]) {
          best = ei;
        }
      }
      pick[idx(best)] = 1;
      total += element_cost[idx(best)];
      for (std::size_t i = 0; i < sets.size(); ++i) {
        if (std::find(sets[i].begin(), sets[i].end(), best) != sets[i].end()) done[i] = 1;
      }
    }
    search.best = total + 1e-9;
    search.best_choice = pick;
  }
  search.run(0.0);

  HittingResult r;
  r.nodes = search.nodes;
  for (std::size_t e = 0; e < element_cost.size(); ++e) {
    if (search.best_choice[e]) {
      r.chosen.push_back(static_cast<int>(e));
      r.cost += element_cost[e];
    }
  }
  return r;
}

namespace {

// Boundary sets of the members restricted to the ground set, with duplicates
// and supersets of other sets removed (they are implied).
std::vector<EdgeSet> essential_boundaries(const CutFamily& fam) {
  std::vector<EdgeSet> sets;
  for (std::size_t i = 0; i < fam.members().size(); ++i) {
    EdgeSet b = fam.member_boundary(i) & fam.ground();
    if (b.empty()) {
      throw Error(ErrorKind::kUncoverable, "member with no ground edge on its boundary");
    }
    sets.push_back(std::move(b));
  }
  std::sort(sets.begin(), sets.end(),
            [](const EdgeSet& a, const EdgeSet& b) {
              return a.count() != b.count() ? a.count() < b.count() : a < b;
            });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<EdgeSet> kept;
  for (const EdgeSet& s : sets) {
    const bool implied = std::any_of(kept.begin(), kept.end(),
                                     [&](const EdgeSet& k) { return k.is_subset_of(s); });
    if (!implied) kept.push_back(s);
  }
  return kept;
}

std::vector<std::vector<int>> as_lists(const std::vector<EdgeSet>& sets) {
  std::vector<std::vector<int>> out;
  out.reserve(sets.size());
  for (const EdgeSet& s : sets) out.push_back(s.ids());
  return out;
}

}  // namespace

RingCover ring_cover_exact(const CutFamily& fam, const std::vector<double>& costs) {
  if (auto bad = check_ring_family(fam)) {
    throw Error(ErrorKind::kNotRingFamily,
                "closure fails for members " + std::to_string(bad->first) + " and " +
                    std::to_string(bad->second));
  }
  const FaultGraph& g = fam.graph();
  RingCover out;
  out.edges = g.empty_set();
  const auto sets = essential_boundaries(fam);
  if (sets.empty()) return out;

  LinearProgramModel lp;
  lp.cost = costs;
  for (const EdgeSet& s : sets) {
    LpRow row;
    row.rhs = 1.0;
    s.for_each([&](int id) { row.terms.emplace_back(id, 1.0); });
    row.tag = "ring-cut";
    lp.add_row(std::move(row));
  }
  const LpSolution sol = solve_lp(lp);
  out.lp_bound = sol.objective;
  bool integral = true;
  EdgeSet rounded = g.empty_set();
  for (int id = 0; id < g.num_edges(); ++id) {
    const double v = sol.x[idx(id)];
    if (v > 1e-7 && v < 1.0 - 1e-7) integral = false;
    if (v >= 1.0 - 1e-7 && fam.ground().contains(id)) rounded.insert(id);
  }
  if (integral && fam.covered_by(rounded)) {
    out.edges = rounded;
    out.cost = g.cost(rounded);
    out.lp_integral = true;
    return out;
  }
  const auto hit = exact_hitting_set(as_lists(sets), costs);
  for (int id : hit.chosen) out.edges.insert(id);
  out.cost = g.cost(out.edges);
  return out;
}

EdgeSet exact_cover(const CutFamily& fam, const std::vector<double>& costs,
                    std::uint64_t node_budget) {
  EdgeSet out = fam.graph().empty_set();
  const auto sets = essential_boundaries(fam);
  if (sets.empty()) return out;
  const auto hit = exact_hitting_set(as_lists(sets), costs, node_budget);
  for (int id : hit.chosen) out.insert(id);
  return out;
}

}  // namespace flexnd
