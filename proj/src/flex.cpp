#include "flexnd/flex.hpp"

#include <algorithm>
#include <map>

#include "flexnd/cut_cover.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"

namespace flexnd {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

CoverResult cover_or_fail(const CutFamily& fam, const std::vector<double>& costs,
                          const char* what) {
  try {
    return primal_dual_cover(fam, costs);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUncoverable) throw;
    throw Error(ErrorKind::kStageCoverFailed, std::string(what) + ": " + e.what());
  }
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n) return;
  std::vector<int> c(idx(k));
  for (int i = 0; i < k; ++i) c[idx(i)] = i;
  while (true) {
    fn(c);
    int i = k - 1;
    while (i >= 0 && c[idx(i)] == n - k + i) --i;
    if (i < 0) return;
    ++c[idx(i)];
    for (int j = i + 1; j < k; ++j) c[idx(j)] = c[idx(j - 1)] + 1;
  }
}

void check_pair(const FaultGraph& g, int s, int t) {
  if (s < 0 || t < 0 || s >= g.num_vertices() || t >= g.num_vertices() || s == t) {
    throw Error(ErrorKind::kInvalidArgument, "terminals must be distinct vertices");
  }
}

}  // namespace

StagePlan plan_stages(int p, int q) {
  if (p < 1 || q < 1) {
    throw Error(ErrorKind::kInvalidArgument, "augmentation needs p >= 1 and q >= 1");
  }
  StagePlan plan{p, q, {}};
  auto unsupported = [&] {
    return Error(ErrorKind::kUnsupportedParameters,
                 "no uncrossable split known for (" + std::to_string(p) + "," +
                     std::to_string(q - 1) + ") -> (" + std::to_string(p) + "," +
                     std::to_string(q) + ")");
  };
  if (p == 1) {
    if (q > 3) throw unsupported();
    return plan;
  }
  if (p == 2 || q == 1) return plan;
  if (q <= 3 || (q == 4 && p % 2 == 0)) {
    for (int i = 0; i < p; ++i) plan.stages.push_back(i);
    return plan;
  }
  throw unsupported();
}

EdgeSet augment_stages(const FaultGraph& g, const EdgeSet& f, const StagePlan& plan,
                       const FlexOptions& options, std::vector<StageRecord>* log) {
  const int n = g.num_vertices();
  const int p = plan.p;
  const int q = plan.q;
  const auto reqs = all_pairs_requirement(n, p, q);
  const auto costs = g.costs();
  EdgeSet current = f;

  auto run_stage = [&](const CutFamily& fam, int stage) {
    StageRecord rec{q, stage, 1, fam.members().size(), 0.0};
    if (fam.empty()) {
      if (log) log->push_back(rec);
      return;
    }
    const EdgeSet before = current;
    const CoverResult cover = cover_or_fail(fam, costs, "stage cover");
    current |= cover.edges;
    rec.cost = g.cost(cover.edges);
    if (options.hook) {
      StageEvent ev;
      ev.level = q;
      ev.stage = stage;
      ev.family = &fam;
      ev.before = &before;
      ev.added = cover.edges;
      ev.dual_lower_bound = cover.dual_lower_bound;
      options.hook(ev);
    }
    if (log) log->push_back(rec);
  };

  if (!plan.staged()) {
    // violated_cuts_flex_aug checks the (p, q-1) precondition itself
    const CutFamily fam = violated_cuts_flex_aug(g, reqs, current);
    run_stage(fam, -1);
    return current;
  }
  auto base = reqs;
  for (auto& r : base) --r.q;
  if (!is_flex_feasible(g, base, current).feasible) {
    throw Error(ErrorKind::kBaseNotFeasible, "partial solution misses the (p, q-1) level");
  }
  for (int i : plan.stages) {
    const EdgeSet snapshot = current;
    const CutFamily fam(
        g, g.all_edges() - snapshot,
        [&g, snapshot, i, p, q](VertexMask s) {
          const CutCounts c = boundary_counts(g, snapshot, s);
          return c.safe == i && c.total() == p + q - 1;
        },
        CutDomain::kAllCuts);
    run_stage(fam, i);
  }
  return current;
}

EdgeSet solve_fgc_base(const FaultGraph& g, int p, const FlexOptions& options, bool* exact) {
  const int n = g.num_vertices();
  if (options.exact_base && g.num_edges() <= options.budgets.exact_max_edges) {
    try {
      const auto r = exact_solve(g, FlexProblem{all_pairs_requirement(n, p, 0)}, options.budgets);
      if (exact) *exact = true;
      return r.edges;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBudgetExceeded) throw;
    }
  }
  if (exact) *exact = false;
  const auto costs = g.costs();
  EdgeSet current = g.empty_set();
  for (int k = 1; k <= p; ++k) {
    const EdgeSet snapshot = current;
    const CutFamily fam(
        g, g.all_edges() - snapshot,
        [&g, snapshot, k](VertexMask s) {
          return static_cast<int>(boundary(g, snapshot, s).count()) == k - 1;
        },
        CutDomain::kAllCuts);
    current |= cover_or_fail(fam, costs, "edge-connectivity level").edges;
  }
  return current;
}

FlexResult solve_fgc(const FaultGraph& g, int p, int q, const FlexOptions& options) {
  if (p < 1 || q < 0) throw Error(ErrorKind::kInvalidArgument, "need p >= 1 and q >= 0");
  std::vector<StagePlan> plans;
  for (int j = 1; j <= q; ++j) plans.push_back(plan_stages(p, j));
  if (!is_flex_feasible(g, all_pairs_requirement(g.num_vertices(), p, q), g.all_edges())
           .feasible) {
    throw Error(ErrorKind::kInfeasibleInstance, "the input graph is not (p,q)-flex-connected");
  }
  FlexResult out;
  out.edges = solve_fgc_base(g, p, options, &out.base_exact);
  out.base_cost = g.cost(out.edges);
  for (const StagePlan& plan : plans) {
    out.edges = augment_stages(g, out.edges, plan, options, &out.stages);
  }
  out.cost = g.cost(out.edges);
  out.guarantee = fgc_guarantee(p, q, out.base_exact);
  return out;
}

PathBundle PathBundle::from_flow(const FaultGraph& g, const Flow& f) {
  PathBundle b;
  b.source = f.source;
  b.sink = f.sink;
  b.paths = flow_decompose(g, f);
  for (const UnitPath& path : b.paths) {
    EdgeSet es = g.empty_set();
    for (int id : path.edges) es.insert(id);
    b.edge_sets.push_back(std::move(es));
  }
  return b;
}

bool membership_CiQ(const FaultGraph& g, const EdgeSet& f_i, int p, int q,
                    const PathBundle& bundle, std::span<const int> q_paths, VertexMask a) {
  if (!contains_vertex(a, bundle.source) || contains_vertex(a, bundle.sink)) return false;
  const EdgeSet cut = boundary(g, f_i, a);
  const EdgeSet safe = cut & g.safe_edges();
  const auto safe_count = static_cast<int>(safe.count());
  if (safe_count >= p || static_cast<int>(cut.count()) != p + q - 1) return false;
  if (safe_count != static_cast<int>(q_paths.size())) return false;
  EdgeSet hit = g.empty_set();
  for (int j : q_paths) {
    const EdgeSet meet = cut & bundle.edge_sets[idx(j)];
    if (meet.count() != 1) return false;
    const int e = meet.ids().front();
    if (!g.edge(e).safe() || hit.contains(e)) return false;
    hit.insert(e);
  }
  return hit == safe;
}

CapSeed cap_st_seed(const FaultGraph& g, int s, int t, int safe_cap, int unsafe_cap,
                    int demand) {
  std::vector<std::int64_t> cap(idx(g.num_edges()));
  for (const Edge& e : g.edges()) cap[idx(e.id)] = e.safe() ? safe_cap : unsafe_cap;
  CapSeed seed;
  seed.flow = min_cost_flow(g, cap, s, t, demand);
  seed.edges = seed.flow.support(g);
  return seed;
}

namespace {

// Covers C_i (s-side cuts with i safe and p+q-1 total edges of `snapshot`)
// through the ring subfamilies C_i^Q, one exact cover per distinct subfamily.
EdgeSet cover_stage_by_rings(const FaultGraph& g, const EdgeSet& snapshot, int p, int q,
                             int i, const PathBundle& bundle, const FlexOptions& options,
                             StageRecord& rec) {
  const int s = bundle.source;
  const int t = bundle.sink;
  const auto costs = g.costs();
  const CutFamily all(
      g, g.all_edges() - snapshot,
      [&g, snapshot, i, p, q](VertexMask m) {
        const CutCounts c = boundary_counts(g, snapshot, m);
        return c.safe == i && c.total() == p + q - 1;
      },
      CutDomain::kSourceSide, s, t);
  rec.members = all.members().size();
  EdgeSet added = g.empty_set();
  if (all.empty()) return added;
  std::map<std::vector<VertexMask>, EdgeSet> done;
  for_each_combination(static_cast<int>(bundle.size()), i, [&](const std::vector<int>& qs) {
    std::vector<VertexMask> members;
    for (VertexMask a : all.members()) {
      if (membership_CiQ(g, snapshot, p, q, bundle, qs, a)) members.push_back(a);
    }
    if (members.empty()) return;
    auto it = done.find(members);
    if (it == done.end()) {
      const CutFamily fam(
          g, g.all_edges() - snapshot,
          [members](VertexMask m) {
            return std::binary_search(members.begin(), members.end(), m);
          },
          CutDomain::kSourceSide, s, t);
      RingCover rc;
      try {
        rc = ring_cover_exact(fam, costs);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kUncoverable) throw;
        throw Error(ErrorKind::kStageCoverFailed, std::string("ring cover: ") + e.what());
      }
      ++rec.families;
      if (options.hook) {
        StageEvent ev;
        ev.level = q;
        ev.stage = i;
        ev.paths = qs;
        ev.family = &fam;
        ev.before = &snapshot;
        ev.added = rc.edges;
        options.hook(ev);
      }
      it = done.emplace(members, rc.edges).first;
    }
    added |= it->second;
  });
  if (!all.covered_by(added)) {
    throw Error(ErrorKind::kStageCoverFailed,
                "ring subfamilies left a violated cut of stage " + std::to_string(i));
  }
  return added;
}

}  // namespace

FlexResult solve_flex_st(const FaultGraph& g, int s, int t, int p, int q,
                         const FlexOptions& options) {
  check_pair(g, s, t);
  if (p < 1 || q < 0) throw Error(ErrorKind::kInvalidArgument, "need p >= 1 and q >= 0");
  if (2 * (p + q) <= p * q) {
    throw Error(ErrorKind::kParameterConditionViolated,
                "need p + q > pq/2, got (" + std::to_string(p) + "," + std::to_string(q) + ")");
  }
  const std::vector<FlexRequirement> target{{s, t, p, q}};
  if (!is_flex_feasible(g, target, g.all_edges()).feasible) {
    throw Error(ErrorKind::kInfeasibleInstance, "the input graph is not (p,q)-flex-connected");
  }
  FlexResult out;
  // (p,0) is p edge-disjoint paths: exact by unit min-cost flow.
  out.edges = cap_st_seed(g, s, t, 1, 1, p).edges;
  out.base_cost = g.cost(out.edges);
  out.base_exact = true;
  for (int j = 1; j <= q; ++j) {
    const CapSeed seed = cap_st_seed(g, s, t, p + j, p, p * (p + j));
    out.edges |= seed.edges;
    const PathBundle bundle = PathBundle::from_flow(g, seed.flow);
    for (int i = 0; i < p; ++i) {
      StageRecord rec{j, i, 0, 0, 0.0};
      const EdgeSet snapshot = out.edges;
      const EdgeSet added =
          cover_stage_by_rings(g, snapshot, p, j, i, bundle, options, rec);
      rec.cost = g.cost(added - snapshot);
      out.edges |= added;
      out.stages.push_back(rec);
    }
  }
  out.cost = g.cost(out.edges);
  out.guarantee = flex_st_guarantee(p, q);
  return out;
}

FlexResult solve_flex_st_22(const FaultGraph& g, int s, int t, const FlexOptions& options) {
  check_pair(g, s, t);
  if (!is_flex_feasible(g, {{s, t, 2, 2}}, g.all_edges()).feasible) {
    throw Error(ErrorKind::kInfeasibleInstance, "the input graph is not (2,2)-flex-connected");
  }
  const CapSeed seed = cap_st_seed(g, s, t, 2, 1, 4);
  FlexResult out;
  out.edges = seed.edges;
  out.base_cost = g.cost(out.edges);
  out.base_exact = false;
  const PathBundle bundle = PathBundle::from_flow(g, seed.flow);
  const auto costs = g.costs();
  const EdgeSet snapshot = seed.edges;
  const CutFamily violated(
      g, g.all_edges() - snapshot,
      [&g, snapshot](VertexMask m) {
        const CutCounts c = boundary_counts(g, snapshot, m);
        return c.safe < 2 && c.total() == 3;
      },
      CutDomain::kSourceSide, s, t);
  StageRecord rec{2, 1, 0, violated.members().size(), 0.0};
  EdgeSet added = g.empty_set();
  for (int j = 0; j < 3 && !violated.empty(); ++j) {
    const std::vector<int> qs{j};
    std::vector<VertexMask> members;
    for (VertexMask a : violated.members()) {
      if (membership_CiQ(g, snapshot, 2, 2, bundle, qs, a)) members.push_back(a);
    }
    if (members.empty()) continue;
    const CutFamily fam(
        g, g.all_edges() - snapshot,
        [members](VertexMask m) { return std::binary_search(members.begin(), members.end(), m); },
        CutDomain::kSourceSide, s, t);
    const RingCover rc = ring_cover_exact(fam, costs);
    ++rec.families;
    if (options.hook) {
      StageEvent ev;
      ev.level = 2;
      ev.stage = 1;
      ev.paths = qs;
      ev.family = &fam;
      ev.before = &snapshot;
      ev.added = rc.edges;
      options.hook(ev);
    }
    added |= rc.edges;
  }
  if (!violated.covered_by(added)) {
    throw Error(ErrorKind::kStageCoverFailed, "three path families left a violated cut");
  }
  out.edges |= added;
  rec.cost = g.cost(added);
  out.stages.push_back(rec);
  out.cost = g.cost(out.edges);
  out.guarantee = kFlexSt22Guarantee;
  return out;
}

double fgc_guarantee(int p, int q, bool exact_base) {
  double total = exact_base ? 1.0 : 2.0 * p;
  for (int j = 1; j <= q; ++j) {
    const StagePlan plan = plan_stages(p, j);
    total += plan.staged() ? 2.0 * static_cast<double>(plan.stages.size()) : 2.0;
  }
  return total;
}

double flex_st_guarantee(int p, int q) {
  double total = 1.0;
  for (int j = 1; j <= q; ++j) {
    total += p + j;
    for (int i = 0; i < p; ++i) total += static_cast<double>(binomial(p * (p + j), i));
  }
  return total;
}

double fgc_published_ratio(int p, int q) {
  if (q == 0) return 2.0;
  double best = 0.0;
  auto offer = [&](double r) { best = best == 0.0 ? r : std::min(best, r); };
  if (p == 2) offer(2.0 * q + 2);
  if (q == 1) offer(4.0);
  if (q == 2) offer(2.0 * p + 4);
  if (q == 3) offer(4.0 * p + 4);
  if (q == 4 && p % 2 == 0) offer(6.0 * p + 4);
  return best;
}

}  // namespace flexnd
