#include "flexnd/lp.hpp"

#include <algorithm>
#include <cmath>

#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/flow.hpp"

namespace flexnd {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool better(const SeparatedRow& a, const std::optional<SeparatedRow>& best) {
  if (!best) return true;
  if (a.violation > best->violation + 1e-12) return true;
  if (a.violation < best->violation - 1e-12) return false;
  return a.cut < best->cut;
}

void check_x(const FaultGraph& g, const std::vector<double>& x) {
  if (x.size() != idx(g.num_edges())) {
    throw Error(ErrorKind::kInvalidArgument, "x needs one value per edge");
  }
}

LpRow cut_row(const FaultGraph& g, VertexMask s, const EdgeSet& skip, double rhs,
              const char* tag) {
  LpRow row;
  row.rhs = rhs;
  row.tag = tag;
  for (const Edge& e : g.edges()) {
    if (e.crosses(s) && !skip.contains(e.id)) row.terms.emplace_back(e.id, 1.0);
  }
  return row;
}

std::optional<SeparatedRow> separate_capacity(const FaultGraph& g,
                                              const std::vector<FlexRequirement>& reqs,
                                              const std::vector<double>& x) {
  const int n = g.num_vertices();
  std::optional<SeparatedRow> best;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    if (r.p == 0) continue;
    std::vector<double> cap(idx(g.num_edges()));
    for (const Edge& e : g.edges()) {
      cap[idx(e.id)] = (e.safe() ? r.p + r.q : r.p) * x[idx(e.id)];
    }
    const double need = static_cast<double>(r.p) * (r.p + r.q);
    const MaxFlowResult mf = max_flow_min_cut(g, cap, r.s, r.t);
    if (mf.value >= need - kSeparationTol) continue;
    SeparatedRow cand;
    cand.kind = RowClass::kFlexCapacity;
    cand.source = static_cast<int>(i);
    cand.cut = canonical_cut(mf.source_side, n, n - 1);
    cand.removed = g.empty_set();
    cand.violation = need - mf.value;
    cand.row.rhs = need;
    cand.row.tag = "flex-capacity";
    for (const Edge& e : g.edges()) {
      if (e.crosses(cand.cut)) cand.row.terms.emplace_back(e.id, e.safe() ? r.p + r.q : r.p);
    }
    if (better(cand, best)) best = std::move(cand);
  }
  return best;
}

std::optional<SeparatedRow> sweep_cut_rows(const FaultGraph& g,
                                           const std::vector<FlexRequirement>& reqs,
                                           const std::vector<double>& x) {
  const int n = g.num_vertices();
  std::optional<SeparatedRow> best;
  std::vector<std::pair<double, int>> unsafe;
  for_each_cut(n, CutDomain::kAllCuts, -1, -1, [&](VertexMask s) {
    if (contains_vertex(s, n - 1)) return;
    double safe_sum = 0.0;
    unsafe.clear();
    for (const Edge& e : g.edges()) {
      if (!e.crosses(s)) continue;
      if (e.safe()) {
        safe_sum += x[idx(e.id)];
      } else {
        unsafe.emplace_back(-x[idx(e.id)], e.id);
      }
    }
    std::sort(unsafe.begin(), unsafe.end());
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      const auto& r = reqs[i];
      if (r.p == 0 || !separates(s, r.s, r.t)) continue;
      const std::size_t drop = std::min(unsafe.size(), idx(r.q));
      double sum = safe_sum;
      for (std::size_t j = drop; j < unsafe.size(); ++j) sum -= unsafe[j].first;
      const double violation = r.p - sum;
      if (violation <= kSeparationTol) continue;
      if (best && (violation < best->violation - 1e-12 ||
                   (violation <= best->violation + 1e-12 && s >= best->cut))) {
        continue;
      }
      SeparatedRow cand;
      cand.source = static_cast<int>(i);
      cand.cut = s;
      cand.removed = g.empty_set();
      for (std::size_t j = 0; j < drop; ++j) cand.removed.insert(unsafe[j].second);
      cand.violation = violation;
      cand.row = cut_row(g, s, cand.removed, r.p, "flex-cut");
      best = std::move(cand);
    }
  });
  return best;
}

std::optional<SeparatedRow> flow_cut_rows(const FaultGraph& g,
                                          const std::vector<FlexRequirement>& reqs,
                                          const std::vector<double>& x,
                                          const Budgets& budgets) {
  const int n = g.num_vertices();
  const std::vector<int> unsafe = g.unsafe_edges().ids();
  std::optional<SeparatedRow> best;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    if (r.p == 0) continue;
    const int size = std::min(r.q, static_cast<int>(unsafe.size()));
    if (binomial(static_cast<int>(unsafe.size()), size) > budgets.enumeration) {
      throw Error(ErrorKind::kEnumerationTooLarge, "too many removal sets to separate");
    }
    for_each_subset(unsafe, size, idx(g.num_edges()), [&](const EdgeSet& b) {
      std::vector<double> cap(x);
      b.for_each([&](int id) { cap[idx(id)] = 0.0; });
      const MaxFlowResult mf = max_flow_min_cut(g, cap, r.s, r.t);
      const double violation = r.p - mf.value;
      if (violation <= kSeparationTol) return true;
      SeparatedRow cand;
      cand.source = static_cast<int>(i);
      cand.cut = canonical_cut(mf.source_side, n, n - 1);
      cand.removed = b & boundary(g, g.all_edges(), cand.cut);
      cand.violation = violation;
      cand.row = cut_row(g, cand.cut, cand.removed, r.p, "flex-cut");
      if (better(cand, best)) best = std::move(cand);
      return true;
    });
  }
  return best;
}

template <typename Separate>
LpRun cutting_plane(const FaultGraph& g, const CuttingPlaneOptions& options, Separate&& sep) {
  LpRun run;
  run.model.cost = g.costs();
  run.solution = solve_lp(run.model);
  while (true) {
    auto row = sep(run.solution.x);
    if (!row) break;
    if (run.rounds >= options.max_rounds) {
      throw Error(ErrorKind::kBudgetExceeded,
                  "cutting plane did not settle in " + std::to_string(options.max_rounds) +
                      " rounds");
    }
    if (!run.model.add_row(std::move(row->row))) {
      throw Error(ErrorKind::kBudgetExceeded,
                  "separation returned a row the LP already holds (numerical stall)");
    }
    run.solution = solve_lp(run.model);
    ++run.rounds;
  }
  return run;
}

}  // namespace

std::optional<SeparatedRow> separate_flex(const FaultGraph& g,
                                          const std::vector<FlexRequirement>& reqs,
                                          const std::vector<double>& x,
                                          FlexSeparation method, const Budgets& budgets) {
  validate(g, reqs);
  check_x(g, x);
  if (auto row = separate_capacity(g, reqs, x)) return row;
  if (method == FlexSeparation::kCutSweep) return sweep_cut_rows(g, reqs, x);
  return flow_cut_rows(g, reqs, x, budgets);
}

std::optional<SeparatedRow> separate_bulk(const FaultGraph& g,
                                          const std::vector<BulkScenario>& omega,
                                          const std::vector<double>& x) {
  validate(g, omega);
  check_x(g, x);
  const int n = g.num_vertices();
  std::optional<SeparatedRow> best;
  for (std::size_t j = 0; j < omega.size(); ++j) {
    std::vector<double> cap(x);
    omega[j].fail.for_each([&](int id) { cap[idx(id)] = 0.0; });
    for (auto [u, v] : omega[j].pairs) {
      const MaxFlowResult mf = max_flow_min_cut(g, cap, u, v);
      const double violation = 1.0 - mf.value;
      if (violation <= kSeparationTol) continue;
      SeparatedRow cand;
      cand.kind = RowClass::kBulkCut;
      cand.source = static_cast<int>(j);
      cand.cut = canonical_cut(mf.source_side, n, n - 1);
      cand.removed = omega[j].fail;
      cand.violation = violation;
      cand.row = cut_row(g, cand.cut, omega[j].fail, 1.0, "bulk-cut");
      if (better(cand, best)) best = std::move(cand);
    }
  }
  return best;
}

LpRun solve_flex_lp(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                    const CuttingPlaneOptions& options) {
  validate(g, reqs);
  return cutting_plane(g, options, [&](const std::vector<double>& x) {
    return separate_flex(g, reqs, x, options.method, options.budgets);
  });
}

LpRun solve_bulk_lp(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                    const CuttingPlaneOptions& options) {
  validate(g, omega);
  return cutting_plane(g, options,
                       [&](const std::vector<double>& x) { return separate_bulk(g, omega, x); });
}

AugmentationCheck check_augmentation_lp_validity(const FaultGraph& g,
                                                 const std::vector<FlexRequirement>& reqs,
                                                 const std::vector<double>& x,
                                                 const EdgeSet& f1) {
  check_x(g, x);
  const CutFamily fam = violated_cuts_flex_aug(g, reqs, f1);
  AugmentationCheck out;
  for (std::size_t i = 0; i < fam.members().size(); ++i) {
    double sum = 0.0;
    (fam.member_boundary(i) - f1).for_each([&](int id) { sum += x[idx(id)]; });
    ++out.cuts_checked;
    if (sum < 1.0 - kSeparationTol && (out.valid || sum < out.coverage)) {
      out.valid = false;
      out.witness = fam.members()[i];
      out.coverage = sum;
    }
  }
  return out;
}

FaultGraph gap_instance(int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "gap instance needs k >= 1");
  GraphBuilder b(k + 3);
  for (int i = 0; i <= k; ++i) {
    b.add_unsafe(0, 2 + i, 0.5);
    b.add_unsafe(0, 2 + i, 0.5);
    b.add_safe(2 + i, 1, k + 1.0);
  }
  return b.build();
}

std::vector<double> gap_fractional(const FaultGraph& g, int k) {
  std::vector<double> x(idx(g.num_edges()));
  for (const Edge& e : g.edges()) x[idx(e.id)] = e.safe() ? 2.0 / (k + 1) : 1.0;
  return x;
}

GapReport gap_experiment(int k, const GapOptions& options) {
  const FaultGraph g = gap_instance(k);
  const std::vector<FlexRequirement> reqs{{0, 1, 1, k}};
  GapReport rep;
  rep.k = k;
  const auto x = gap_fractional(g, k);
  for (const Edge& e : g.edges()) rep.fractional_cost += e.cost * x[idx(e.id)];
  rep.fractional_clean = !separate_flex(g, reqs, x, FlexSeparation::kCutSweep, options.budgets);
  if (k <= options.lp_up_to) {
    CuttingPlaneOptions cp;
    cp.budgets = options.budgets;
    rep.lp_optimum = solve_flex_lp(g, reqs, cp).solution.objective;
  }
  if (k <= options.exact_up_to) rep.exact_opt = exact_solve(g, FlexProblem{reqs}, options.budgets).cost;

  // Candidate = every unsafe edge plus the safe edges of `chosen`.
  rep.min_safe = (k + 2) / 2;
  const std::vector<int> safe = g.safe_edges().ids();
  rep.bound_certified = true;
  for (int size = 0; size < rep.min_safe; ++size) {
    for_each_subset(safe, size, idx(g.num_edges()), [&](const EdgeSet& chosen) {
      const EdgeSet h = g.unsafe_edges() | chosen;
      VertexMask s = vertex_bit(0);
      for (int i = 0; i <= k; ++i) {
        if (!chosen.contains(3 * i + 2)) s |= vertex_bit(2 + i);
      }
      const CutCounts c = boundary_counts(g, h, s);
      if (c.safe == 0 && c.total() < k + 1) {
        ++rep.candidates_rejected;
      } else {
        rep.bound_certified = false;
      }
      return true;
    });
  }
  const double safe_cost = k + 1.0;
  rep.integral_lower_bound = rep.min_safe * safe_cost;
  rep.gap_lower_bound = rep.integral_lower_bound / rep.fractional_cost;
  return rep;
}

}  // namespace flexnd
