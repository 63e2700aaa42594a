#include "flexnd/exact.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "flexnd/error.hpp"

namespace flexnd {

namespace {

using Mask = std::uint64_t;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct FlexCut {
  Mask cross = 0;
  Mask safe = 0;
  // (p, p + q) thresholds of the pairs this cut separates, dominated ones dropped.
  std::vector<std::pair<int, int>> needs;
};

struct Scenario {
  Mask fail = 0;
  std::vector<TerminalPair> pairs;
};

struct Violation {
  Mask candidates = 0;
  int need = 0;  // edges any completion still adds from candidates
};

class Search {
 public:
  Search(const FaultGraph& g, std::uint64_t node_budget) : g_(g), budget_(node_budget) {
    const int m = g.num_edges();
    order_.resize(idx(m));
    for (int i = 0; i < m; ++i) order_[idx(i)] = i;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return g.edge(a).cost < g.edge(b).cost; });
    for (int i = 0; i < m; ++i) {
      cost_.push_back(g.edge(i).cost);
      if (g.edge(i).safe()) safe_ |= Mask{1} << i;
    }
  }

  void add_flex(const std::vector<FlexRequirement>& reqs) {
    const int n = g_.num_vertices();
    const bool single = reqs.size() == 1;
    const CutDomain domain = single ? CutDomain::kSourceSide : CutDomain::kAllCuts;
    const int s = single ? reqs[0].s : -1;
    const int t = single ? reqs[0].t : -1;
    for_each_cut(n, domain, s, t, [&](VertexMask cut) {
      if (!single && contains_vertex(cut, n - 1)) return;
      FlexCut fc;
      for (const Edge& e : g_.edges()) {
        if (e.crosses(cut)) fc.cross |= Mask{1} << e.id;
      }
      fc.safe = fc.cross & safe_;
      for (const auto& r : reqs) {
        if (!separates(cut, r.s, r.t)) continue;
        const std::pair<int, int> need{r.p, r.p + r.q};
        const bool dominated = std::any_of(fc.needs.begin(), fc.needs.end(), [&](auto x) {
          return x.first >= need.first && x.second >= need.second;
        });
        if (dominated) continue;
        std::erase_if(fc.needs, [&](auto x) {
          return need.first >= x.first && need.second >= x.second;
        });
        fc.needs.push_back(need);
      }
      if (!fc.needs.empty()) cuts_.push_back(std::move(fc));
    });
  }

  void add_bulk(const std::vector<BulkScenario>& omega) {
    for (const auto& sc : omega) scenarios_.push_back({sc.fail.low_word(), sc.pairs});
  }

  bool feasible(Mask h) {
    Mask dead = 0;
    const bool clean = violations(h, ~h, dead).empty();
    return clean && dead == 0;
  }

  void solve(Mask start_best, double best_cost) {
    best_ = start_best;
    best_cost_ = best_cost;
    run(0, 0, 0.0);
  }

  Mask best() const { return best_; }
  double best_cost() const { return best_cost_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  // Violated constraints of `chosen`; candidates exclude `excluded` edges.
  // Stops at the first unfixable one and reports it through `dead`.
  std::vector<Violation> violations(Mask chosen, Mask excluded, Mask& dead) {
    std::vector<Violation> out;
    const Mask open = ~chosen & ~excluded & all_;
    for (const FlexCut& c : cuts_) {
      const int a = std::popcount(chosen & c.safe);
      const int t = std::popcount(chosen & c.cross);
      const Mask avail = c.cross & open;
      for (auto [p, total] : c.needs) {
        if (a >= p || t >= total) continue;
        const int need_safe = p - a;
        const int need_total = total - t;
        const bool by_safe = std::popcount(avail & safe_) >= need_safe;
        const bool by_total = std::popcount(avail) >= need_total;
        if (!by_safe && !by_total) {
          dead = 1;
          return out;
        }
        const int need = std::min(by_safe ? need_safe : need_total,
                                  by_total ? need_total : need_safe);
        out.push_back({avail, need});
      }
    }
    for (const Scenario& sc : scenarios_) {
      UnionFind uf(g_.num_vertices());
      const Mask live = chosen & ~sc.fail;
      for (Mask bits = live; bits != 0; bits &= bits - 1) {
        const Edge& e = g_.edge(std::countr_zero(bits));
        uf.unite(e.u, e.v);
      }
      for (auto [u, v] : sc.pairs) {
        if (uf.find(u) == uf.find(v)) continue;
        VertexMask side = 0;
        for (int w = 0; w < g_.num_vertices(); ++w) {
          if (uf.find(w) == uf.find(u)) side |= vertex_bit(w);
        }
        Mask avail = 0;
        for (Mask bits = open & ~sc.fail; bits != 0; bits &= bits - 1) {
          const int id = std::countr_zero(bits);
          if (g_.edge(id).crosses(side)) avail |= Mask{1} << id;
        }
        if (avail == 0) {
          dead = 1;
          return out;
        }
        out.push_back({avail, 1});
      }
    }
    return out;
  }

  double cheapest(Mask avail, int k) const {
    double sum = 0.0;
    for (int id : order_) {
      if (k == 0) break;
      if ((avail >> id) & 1U) {
        sum += cost_[idx(id)];
        --k;
      }
    }
    return sum;
  }

  void run(Mask chosen, Mask excluded, double so_far) {
    if (++nodes_ > budget_) {
      throw Error(ErrorKind::kBudgetExceeded, "exact search exceeded its node budget");
    }
    Mask dead = 0;
    const auto viol = violations(chosen, excluded, dead);
    if (dead != 0) return;
    if (viol.empty()) {
      if (so_far < best_cost_ - 1e-12) {
        best_cost_ = so_far;
        best_ = chosen;
      }
      return;
    }
    double bound = so_far;
    const Violation* pick = nullptr;
    for (const Violation& v : viol) {
      bound = std::max(bound, so_far + cheapest(v.candidates, v.need));
      if (pick == nullptr || std::popcount(v.candidates) < std::popcount(pick->candidates)) {
        pick = &v;
      }
    }
    if (bound >= best_cost_ - 1e-12) return;
    Mask branch_excluded = excluded;
    const Mask cand = pick->candidates;
    for (int id : order_) {
      if (!((cand >> id) & 1U)) continue;
      const Mask bit = Mask{1} << id;
      run(chosen | bit, branch_excluded, so_far + cost_[idx(id)]);
      branch_excluded |= bit;
    }
  }

 public:
  Mask all_ = 0;

 private:
  const FaultGraph& g_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<int> order_;
  std::vector<double> cost_;
  Mask safe_ = 0;
  std::vector<FlexCut> cuts_;
  std::vector<Scenario> scenarios_;
  Mask best_ = 0;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

}  // namespace

ExactResult exact_solve(const FaultGraph& g, const Problem& problem, const Budgets& budgets,
                        std::optional<double> upper_bound) {
  const int m = g.num_edges();
  if (m > budgets.exact_max_edges || m > 64) {
    throw Error(ErrorKind::kBudgetExceeded,
                "exact search is limited to " + std::to_string(budgets.exact_max_edges) +
                    " edges, instance has " + std::to_string(m));
  }
  Search search(g, budgets.exact_nodes);
  search.all_ = m == 64 ? ~Mask{0} : (Mask{1} << m) - 1;
  if (const auto* f = std::get_if<FlexProblem>(&problem)) {
    validate(g, f->pairs);
    if (g.num_vertices() > kMaxEnumerationVertices) {
      throw Error(ErrorKind::kBudgetExceeded, "exact flex search needs n <= 24");
    }
    search.add_flex(f->pairs);
  } else if (const auto* b = std::get_if<BulkProblem>(&problem)) {
    validate(g, b->scenarios);
    search.add_bulk(b->scenarios);
  } else {
    const auto& r = std::get<RelativeProblem>(problem);
    search.add_bulk(expand_rsndp_to_bulk(g, r.pairs, budgets));
  }
  if (!search.feasible(search.all_)) {
    throw Error(ErrorKind::kInfeasibleInstance, "the whole graph is not feasible");
  }
  // Start from the full graph (or a caller-supplied bound) as the incumbent.
  double start = g.cost(g.all_edges()) + 1e-9;
  if (upper_bound) start = std::min(start, *upper_bound + 1e-9);
  search.solve(search.all_, start);

  ExactResult r;
  r.edges = EdgeSet::from_word(static_cast<std::size_t>(m), search.best());
  r.cost = g.cost(r.edges);
  r.nodes = search.nodes();
  return r;
}

}  // namespace flexnd
