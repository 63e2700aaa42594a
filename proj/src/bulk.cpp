#include "flexnd/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "flexnd/cut_cover.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/rng.hpp"

namespace flexnd {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> all_pairs_distances(const FaultGraph& g,
                                                     const std::vector<double>& costs,
                                                     const EdgeSet& usable) {
  const int n = g.num_vertices();
  std::vector<std::vector<double>> d(idx(n), std::vector<double>(idx(n), kInf));
  for (int v = 0; v < n; ++v) d[idx(v)][idx(v)] = 0.0;
  usable.for_each([&](int id) {
    const Edge& e = g.edge(id);
    const double c = costs[idx(id)];
    d[idx(e.u)][idx(e.v)] = std::min(d[idx(e.u)][idx(e.v)], c);
    d[idx(e.v)][idx(e.u)] = std::min(d[idx(e.v)][idx(e.u)], c);
  });
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        d[idx(i)][idx(j)] = std::min(d[idx(i)][idx(j)], d[idx(i)][idx(k)] + d[idx(k)][idx(j)]);
      }
    }
  }
  return d;
}

int bulk_levels(const std::vector<BulkScenario>& omega) {
  return std::max(bulk_width(omega), 1);
}

// Tree paths of every terminal pair.
EdgeSet pair_paths(const FaultGraph& g, const TreeEmbedding& tree,
                   const std::vector<BulkScenario>& omega) {
  EdgeSet out = g.empty_set();
  for (const auto& sc : omega) {
    for (auto [u, v] : sc.pairs) out |= tree.path(u, v);
  }
  return out;
}

}  // namespace

EdgeSet TreeEmbedding::path(int u, int v) const {
  EdgeSet out(tree_edges.universe());
  while (u != v) {
    if (depth[idx(u)] >= depth[idx(v)]) {
      out.insert(parent_edge[idx(u)]);
      u = parent[idx(u)];
    } else {
      out.insert(parent_edge[idx(v)]);
      v = parent[idx(v)];
    }
  }
  return out;
}

TreeEmbedding sample_tree(const FaultGraph& g, const std::vector<double>& costs,
                          std::uint64_t seed) {
  const int n = g.num_vertices();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "empty graph");
  Rng rng(seed);
  TreeEmbedding t;
  t.root = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<double> w(idx(g.num_edges()));
  for (int id = 0; id < g.num_edges(); ++id) {
    w[idx(id)] = costs[idx(id)] * std::exp2(rng.unit());
  }
  std::vector<double> dist(idx(n), kInf);
  t.parent.assign(idx(n), -1);
  t.parent_edge.assign(idx(n), -1);
  t.depth.assign(idx(n), 0);
  std::vector<char> done(idx(n), 0);
  std::vector<int> finalized;  // parents always precede children
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[idx(t.root)] = 0.0;
  heap.emplace(0.0, t.root);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[idx(v)]) continue;
    done[idx(v)] = 1;
    finalized.push_back(v);
    for (int id : g.incident(v)) {
      const int u = g.edge(id).other(v);
      if (done[idx(u)]) continue;
      const double nd = d + w[idx(id)];
      if (nd < dist[idx(u)] || (nd == dist[idx(u)] && id < t.parent_edge[idx(u)])) {
        dist[idx(u)] = nd;
        t.parent[idx(u)] = v;
        t.parent_edge[idx(u)] = id;
        heap.emplace(nd, u);
      }
    }
  }
  if (std::any_of(done.begin(), done.end(), [](char c) { return c == 0; })) {
    throw Error(ErrorKind::kDisconnected, "graph is not connected");
  }
  t.tree_edges = g.empty_set();
  for (int v : finalized) {
    if (v == t.root) continue;
    t.tree_edges.insert(t.parent_edge[idx(v)]);
    t.depth[idx(v)] = t.depth[idx(t.parent[idx(v)])] + 1;
  }

  const auto dg = all_pairs_distances(g, costs, g.all_edges());
  const auto dt = all_pairs_distances(g, costs, t.tree_edges);
  double sum = 0.0;
  int pairs = 0;
  t.max_stretch = 1.0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (dg[idx(u)][idx(v)] <= 1e-12) continue;
      const double s = dt[idx(u)][idx(v)] / dg[idx(u)][idx(v)];
      t.max_stretch = std::max(t.max_stretch, s);
      sum += s;
      ++pairs;
    }
  }
  t.mean_stretch = pairs > 0 ? sum / pairs : 1.0;
  return t;
}

std::size_t HittingInstance::alpha() const {
  std::size_t best = 0;
  for (const auto& h : hits) best = std::max(best, h.size());
  return best;
}

std::vector<std::vector<int>> HittingInstance::hitters() const {
  std::vector<std::vector<int>> out(sets.size());
  for (std::size_t j = 0; j < hits.size(); ++j) {
    for (int i : hits[j]) out[idx(i)].push_back(static_cast<int>(j));
  }
  return out;
}

HittingInstance build_hitting_instance(const FaultGraph& g, const TreeEmbedding& tree,
                                       const EdgeSet& h, std::vector<ViolatingSet> sets,
                                       bool include_h_edges) {
  const int n = g.num_vertices();
  HittingInstance inst;
  inst.sets = std::move(sets);
  for (const Edge& e : g.edges()) {
    const bool in_h = h.contains(e.id);
    if (in_h && !include_h_edges) continue;
    const EdgeSet path = tree.path(e.u, e.v);
    EdgeSet cycle = path;
    cycle.insert(e.id);
    inst.elements.push_back(e.id);
    inst.element_cost.push_back((in_h ? 0.0 : e.cost) + g.cost(path));
    inst.cycles.push_back(std::move(cycle));
  }
  inst.hits.assign(inst.elements.size(), {});
  for (std::size_t i = 0; i < inst.sets.size(); ++i) {
    const ViolatingSet& vs = inst.sets[i];
    UnionFind base(n);
    (h - vs.failed).for_each([&](int id) { base.unite(g.edge(id).u, g.edge(id).v); });
    std::vector<int> label(idx(n));
    for (int v = 0; v < n; ++v) label[idx(v)] = base.find(v);
    for (std::size_t j = 0; j < inst.elements.size(); ++j) {
      UnionFind uf(n);
      (inst.cycles[j] - vs.failed).for_each([&](int id) {
        uf.unite(label[idx(g.edge(id).u)], label[idx(g.edge(id).v)]);
      });
      if (uf.find(label[idx(vs.pair.first)]) == uf.find(label[idx(vs.pair.second)])) {
        inst.hits[j].push_back(static_cast<int>(i));
      }
    }
  }
  return inst;
}

GreedyResult greedy_hitting_set(const HittingInstance& inst) {
  const auto by_set = inst.hitters();
  for (std::size_t i = 0; i < by_set.size(); ++i) {
    if (by_set[i].empty()) {
      const auto& vs = inst.sets[i];
      throw Error(ErrorKind::kUnhittable, "set " + std::to_string(i) + " (F = " +
                                              vs.failed.to_string() + ", pair " +
                                              std::to_string(vs.pair.first) + "-" +
                                              std::to_string(vs.pair.second) +
                                              ") has no hitting element");
    }
  }
  GreedyResult out;
  std::vector<char> hit(inst.sets.size(), 0);
  std::size_t remaining = inst.sets.size();
  while (remaining > 0) {
    int best = -1;
    std::size_t best_gain = 0;
    for (std::size_t j = 0; j < inst.elements.size(); ++j) {
      std::size_t gain = 0;
      for (int i : inst.hits[j]) gain += hit[idx(i)] ? 0 : 1;
      if (gain == 0) continue;
      if (best < 0) {
        best = static_cast<int>(j);
        best_gain = gain;
        continue;
      }
      const double cj = inst.element_cost[j];
      const double cb = inst.element_cost[idx(best)];
      const double lhs = static_cast<double>(gain) * cb;
      const double rhs = static_cast<double>(best_gain) * cj;
      const bool better = lhs != rhs ? lhs > rhs : (cj == 0.0 && cb == 0.0 && gain > best_gain);
      if (better) {
        best = static_cast<int>(j);
        best_gain = gain;
      }
    }
    for (int i : inst.hits[idx(best)]) {
      if (!hit[idx(i)]) {
        hit[idx(i)] = 1;
        --remaining;
      }
    }
    out.chosen.push_back(best);
    out.cost += inst.element_cost[idx(best)];
  }
  return out;
}

EdgeSet augment_bulk_with_tree(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                               const EdgeSet& h_prev, int level, const TreeEmbedding& tree,
                               const BulkOptions& options, BulkLevel* record) {
  const EdgeSet paths = pair_paths(g, tree, omega);
  const EdgeSet h = h_prev | paths;
  auto sets = violating_edge_sets_bulk(g, omega, h, level, options.budgets);
  BulkLevel rec;
  rec.level = level;
  rec.max_stretch = tree.max_stretch;
  rec.mean_stretch = tree.mean_stretch;
  rec.sets = sets.size();
  rec.path_cost = g.cost(paths - h_prev);
  EdgeSet out = h;
  if (!sets.empty()) {
    HittingInstance inst = build_hitting_instance(g, tree, h, sets, false);
    const auto by_set = inst.hitters();
    if (std::any_of(by_set.begin(), by_set.end(), [](const auto& v) { return v.empty(); })) {
      inst = build_hitting_instance(g, tree, h, std::move(sets), true);
      rec.used_h_elements = true;
    }
    GreedyResult picks;
    try {
      picks = greedy_hitting_set(inst);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUnhittable) throw;
      throw Error(ErrorKind::kInfeasibleAugmentation,
                  "level " + std::to_string(level) + ": " + e.what());
    }
    if (options.hook) options.hook(inst, picks);
    for (int j : picks.chosen) out |= inst.cycles[idx(j)];
    rec.elements = inst.elements.size();
    rec.alpha = inst.alpha();
    rec.greedy_cost = picks.cost;
    rec.cycle_cost = g.cost(out - h);
  }
  if (record) *record = rec;
  return out;
}

EdgeSet augment_bulk(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                     const EdgeSet& h_prev, int level, std::uint64_t seed,
                     const BulkOptions& options, BulkLevel* record) {
  const TreeEmbedding tree = sample_tree(g, g.costs(), seed);
  EdgeSet out = augment_bulk_with_tree(g, omega, h_prev, level, tree, options, record);
  if (record) record->tree_seed = seed;
  return out;
}

BulkResult augment_bulk_levels(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                               const EdgeSet& start, const BulkOptions& options) {
  validate(g, omega);
  BulkResult out;
  out.edges = start;
  const int trees = std::max(options.trees, 1);
  for (int level = 1; level <= bulk_levels(omega); ++level) {
    EdgeSet best;
    BulkLevel best_rec;
    double best_cost = kInf;
    for (int t = 0; t < trees; ++t) {
      const std::uint64_t seed =
          mix_seed(options.seed, static_cast<std::uint64_t>(level) * 1000 + static_cast<std::uint64_t>(t));
      BulkLevel rec;
      EdgeSet h = augment_bulk(g, omega, out.edges, level, seed, options, &rec);
      const double c = g.cost(h);
      if (c < best_cost - 1e-12) {
        best_cost = c;
        best = std::move(h);
        best_rec = rec;
      }
    }
    best_rec.edges = best;
    out.edges = std::move(best);
    out.levels.push_back(best_rec);
  }
  out.cost = g.cost(out.edges);
  return out;
}

BulkResult solve_bulk_sndp(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                           const BulkOptions& options) {
  validate(g, omega);
  if (!is_bulk_feasible(g, omega, g.all_edges()).feasible) {
    throw Error(ErrorKind::kInfeasibleInstance, "G itself fails a scenario");
  }
  BulkResult out = augment_bulk_levels(g, omega, g.empty_set(), options);
  if (!is_bulk_feasible(g, omega, out.edges).feasible) {
    throw Error(ErrorKind::kInfeasibleAugmentation, "levels finished with a failing scenario");
  }
  return out;
}

namespace {

// EC-SNDP: pair i needs p_i edge-disjoint paths.
EdgeSet ec_sndp_base(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                     const Budgets& budgets, bool* exact) {
  std::vector<FlexRequirement> base = reqs;
  int max_p = 0;
  for (auto& r : base) {
    r.q = 0;
    max_p = std::max(max_p, r.p);
  }
  if (g.num_edges() <= budgets.exact_max_edges) {
    try {
      const auto r = exact_solve(g, FlexProblem{base}, budgets);
      *exact = true;
      return r.edges;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBudgetExceeded) throw;
    }
  }
  *exact = false;
  const auto costs = g.costs();
  EdgeSet h = g.empty_set();
  for (int k = 1; k <= max_p; ++k) {
    const EdgeSet snapshot = h;
    const CutFamily fam(
        g, g.all_edges() - snapshot,
        [&g, &base, snapshot, k](VertexMask s) {
          const bool needed = std::any_of(base.begin(), base.end(), [&](const FlexRequirement& r) {
            return r.p >= k && separates(s, r.s, r.t);
          });
          return needed && static_cast<int>(boundary(g, snapshot, s).count()) == k - 1;
        },
        CutDomain::kAllCuts);
    h |= primal_dual_cover(fam, costs).edges;
  }
  return h;
}

}  // namespace

BulkResult solve_flex_sndp(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                           const BulkOptions& options) {
  validate(g, reqs);
  if (!is_flex_feasible(g, reqs, g.all_edges()).feasible) {
    throw Error(ErrorKind::kInfeasibleInstance, "G itself misses a flex requirement");
  }
  BulkResult out;
  out.edges = ec_sndp_base(g, reqs, options.budgets, &out.base_exact);
  out.base_cost = g.cost(out.edges);
  int max_q = 0;
  for (const auto& r : reqs) max_q = std::max(max_q, r.q);
  for (int j = 1; j <= max_q; ++j) {
    std::vector<FlexRequirement> active;
    for (const auto& r : reqs) {
      if (r.q >= j) active.push_back({r.s, r.t, r.p, j});
    }
    const auto omega = expand_flex_to_bulk(g, active, options.budgets);
    BulkOptions round = options;
    round.seed = mix_seed(options.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(j));
    BulkResult step = augment_bulk_levels(g, omega, out.edges, round);
    out.edges = std::move(step.edges);
    for (BulkLevel& l : step.levels) out.levels.push_back(l);
  }
  if (!is_flex_feasible(g, reqs, out.edges).feasible) {
    throw Error(ErrorKind::kInfeasibleAugmentation, "rounds finished with a violated pair");
  }
  out.cost = g.cost(out.edges);
  return out;
}

BulkResult solve_rsndp(const FaultGraph& g, const std::vector<RelativeRequirement>& reqs,
                       const BulkOptions& options) {
  validate(g, reqs);
  const auto omega = expand_rsndp_to_bulk(g, reqs, options.budgets);
  BulkResult out = solve_bulk_sndp(g, omega, options);
  if (!is_rsndp_feasible(g, reqs, out.edges, options.budgets).feasible) {
    throw Error(ErrorKind::kInfeasibleAugmentation, "relative requirement left unmet");
  }
  return out;
}

}  // namespace flexnd
