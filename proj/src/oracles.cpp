#include "flexnd/oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "flexnd/error.hpp"
#include "flexnd/flow.hpp"

namespace flexnd {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const auto parsed = std::strtoull(v, &end, 10);
  if (end == v) return fallback;
  return parsed;
}

TerminalPair normalized(TerminalPair p) {
  return p.first <= p.second ? p : TerminalPair{p.second, p.first};
}

// Requirements sharing (p, q), so a cut's counts are tested once per group.
struct FlexGroup {
  int p;
  int q;
  std::vector<int> members;
};

std::vector<FlexGroup> group_requirements(const std::vector<FlexRequirement>& reqs) {
  std::vector<FlexGroup> groups;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const FlexGroup& gr) {
      return gr.p == reqs[i].p && gr.q == reqs[i].q;
    });
    if (it == groups.end()) {
      groups.push_back({reqs[i].p, reqs[i].q, {}});
      it = std::prev(groups.end());
    }
    it->members.push_back(static_cast<int>(i));
  }
  return groups;
}

FlexWitness make_witness(const FaultGraph& g, const EdgeSet& h,
                         const FlexRequirement& req, int index, VertexMask cut) {
  FlexWitness w;
  w.requirement = index;
  w.cut = contains_vertex(cut, req.s) ? cut : (g.vertex_mask() & ~cut);
  w.removed = g.empty_set();
  int budget = req.q;
  boundary(g, h, cut).for_each([&](int id) {
    if (budget > 0 && !g.edge(id).safe()) {
      w.removed.insert(id);
      --budget;
    }
  });
  return w;
}

FlexCheck flex_by_sweep(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                        const EdgeSet& h) {
  const int n = g.num_vertices();
  const auto groups = group_requirements(reqs);
  // Gray code over vertices 0..n-2; vertex n-1 anchors the orientation.
  VertexMask mask = 0;
  CutCounts counts;
  std::vector<std::vector<int>> incident_h(idx(n));
  h.for_each([&](int id) {
    incident_h[idx(g.edge(id).u)].push_back(id);
    incident_h[idx(g.edge(id).v)].push_back(id);
  });
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < limit; ++i) {
    const int v = std::countr_zero(i);
    const VertexMask next = mask ^ vertex_bit(v);
    for (int id : incident_h[idx(v)]) {
      const Edge& e = g.edge(id);
      const bool before = e.crosses(mask);
      const bool after = e.crosses(next);
      if (before == after) continue;
      int& slot = e.safe() ? counts.safe : counts.unsafe;
      slot += after ? 1 : -1;
    }
    mask = next;
    for (const FlexGroup& gr : groups) {
      if (flex_cut_ok(counts, gr.p, gr.q)) continue;
      for (int r : gr.members) {
        if (separates(mask, reqs[idx(r)].s, reqs[idx(r)].t)) {
          return {false, make_witness(g, h, reqs[idx(r)], r, mask)};
        }
      }
    }
  }
  return {};
}

FlexCheck flex_by_flow(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                       const EdgeSet& h) {
  const EdgeSet unsafe_h = h & g.unsafe_edges();
  const std::vector<int> pool = unsafe_h.ids();
  for (std::size_t r = 0; r < reqs.size(); ++r) {
    const FlexRequirement& req = reqs[r];
    const int k = std::min<int>(req.q, static_cast<int>(pool.size()));
    std::optional<FlexWitness> found;
    for_each_subset(pool, k, idx(g.num_edges()), [&](const EdgeSet& b) {
      const auto res = max_flow_min_cut(g, unit_capacities(g, h - b), req.s, req.t);
      if (res.value < req.p - 0.5) {
        FlexWitness w;
        w.requirement = static_cast<int>(r);
        w.cut = res.source_side;
        w.removed = b;
        found = w;
        return false;
      }
      return true;
    });
    if (found) return {false, found};
  }
  return {};
}

}  // namespace

Budgets Budgets::from_env() {
  Budgets b;
  b.enumeration = env_or("FLEXND_ENUM_BUDGET", b.enumeration);
  b.exact_max_edges =
      static_cast<int>(env_or("FLEXND_EXACT_MAX_EDGES", static_cast<std::uint64_t>(b.exact_max_edges)));
  b.exact_nodes = env_or("FLEXND_EXACT_NODE_BUDGET", b.exact_nodes);
  return b;
}

std::vector<FlexRequirement> all_pairs_requirement(int n, int p, int q) {
  std::vector<FlexRequirement> out;
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) out.push_back({s, t, p, q});
  }
  return out;
}

void validate(const FaultGraph& g, const std::vector<FlexRequirement>& reqs) {
  for (const auto& r : reqs) {
    if (r.s < 0 || r.t < 0 || r.s >= g.num_vertices() || r.t >= g.num_vertices() ||
        r.s == r.t || r.p < 1 || r.q < 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "flex requirement needs s != t in range, p >= 1, q >= 0");
    }
  }
}

void validate(const FaultGraph& g, const std::vector<BulkScenario>& omega) {
  for (const auto& sc : omega) {
    if (sc.fail.universe() != idx(g.num_edges())) {
      throw Error(ErrorKind::kInvalidArgument, "scenario edge set has the wrong universe");
    }
    if (sc.pairs.empty()) throw Error(ErrorKind::kInvalidArgument, "scenario without pairs");
    for (auto [s, t] : sc.pairs) {
      if (s < 0 || t < 0 || s >= g.num_vertices() || t >= g.num_vertices() || s == t) {
        throw Error(ErrorKind::kInvalidArgument, "scenario pair out of range or s == t");
      }
    }
  }
}

void validate(const FaultGraph& g, const std::vector<RelativeRequirement>& reqs) {
  for (const auto& r : reqs) {
    if (r.s < 0 || r.t < 0 || r.s >= g.num_vertices() || r.t >= g.num_vertices() ||
        r.s == r.t || r.r < 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "relative requirement needs s != t in range and r >= 1");
    }
  }
}

FlexCheck is_flex_feasible(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                           const EdgeSet& h, FlexMethod method) {
  validate(g, reqs);
  if (reqs.empty()) return {};
  if (method == FlexMethod::kCutSweep && g.num_vertices() <= kMaxEnumerationVertices) {
    return flex_by_sweep(g, reqs, h);
  }
  return flex_by_flow(g, reqs, h);
}

BulkCheck is_bulk_feasible(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                           const EdgeSet& h) {
  for (std::size_t j = 0; j < omega.size(); ++j) {
    UnionFind uf(g.num_vertices());
    (h - omega[j].fail).for_each([&](int id) { uf.unite(g.edge(id).u, g.edge(id).v); });
    for (std::size_t k = 0; k < omega[j].pairs.size(); ++k) {
      const auto [s, t] = omega[j].pairs[k];
      if (uf.find(s) != uf.find(t)) {
        return {false, BulkWitness{static_cast<int>(j), static_cast<int>(k)}};
      }
    }
  }
  return {};
}

RelativeCheck is_rsndp_feasible(const FaultGraph& g,
                                const std::vector<RelativeRequirement>& reqs,
                                const EdgeSet& h, const Budgets& budgets) {
  validate(g, reqs);
  int max_r = 0;
  for (const auto& r : reqs) max_r = std::max(max_r, r.r);
  const std::vector<int> pool = h.ids();
  if (count_subsets_up_to(static_cast<int>(pool.size()), max_r - 1) > budgets.enumeration) {
    throw Error(ErrorKind::kEnumerationTooLarge,
                "relative check needs more than " + std::to_string(budgets.enumeration) +
                    " failure sets");
  }
  RelativeCheck result;
  for (int size = 0; size < max_r && result.feasible; ++size) {
    for_each_subset(pool, size, idx(g.num_edges()), [&](const EdgeSet& f) {
      UnionFind in_g(g.num_vertices());
      UnionFind in_h(g.num_vertices());
      (g.all_edges() - f).for_each([&](int id) { in_g.unite(g.edge(id).u, g.edge(id).v); });
      (h - f).for_each([&](int id) { in_h.unite(g.edge(id).u, g.edge(id).v); });
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        const auto& r = reqs[i];
        if (r.r <= size) continue;
        if (in_g.find(r.s) == in_g.find(r.t) && in_h.find(r.s) != in_h.find(r.t)) {
          result = {false, RelativeWitness{static_cast<int>(i), f}};
          return false;
        }
      }
      return true;
    });
  }
  return result;
}

CutFamily violated_cuts_flex_aug(const FaultGraph& g,
                                 const std::vector<FlexRequirement>& reqs,
                                 const EdgeSet& f1) {
  validate(g, reqs);
  std::vector<FlexRequirement> base = reqs;
  for (auto& r : base) {
    if (r.q < 1) {
      throw Error(ErrorKind::kInvalidArgument, "augmentation target needs q >= 1");
    }
    --r.q;
  }
  if (!is_flex_feasible(g, base, f1).feasible) {
    throw Error(ErrorKind::kBaseNotFeasible, "partial solution misses the (p, q-1) level");
  }
  const auto groups = group_requirements(reqs);
  auto member = [&g, reqs, groups, f1](VertexMask s) {
    const CutCounts c = boundary_counts(g, f1, s);
    for (const FlexGroup& gr : groups) {
      if (c.safe >= gr.p || c.total() != gr.p + gr.q - 1) continue;
      for (int r : gr.members) {
        if (separates(s, reqs[idx(r)].s, reqs[idx(r)].t)) return true;
      }
    }
    return false;
  };
  if (reqs.size() == 1) {
    return CutFamily(g, g.all_edges() - f1, member, CutDomain::kSourceSide, reqs[0].s,
                     reqs[0].t);
  }
  return CutFamily(g, g.all_edges() - f1, member, CutDomain::kAllCuts);
}

int bulk_width(const std::vector<BulkScenario>& omega) {
  int w = 0;
  for (const auto& sc : omega) w = std::max(w, static_cast<int>(sc.fail.count()));
  return w;
}

std::vector<ViolatingSet> violating_edge_sets_bulk(const FaultGraph& g,
                                                   const std::vector<BulkScenario>& omega,
                                                   const EdgeSet& h, int level,
                                                   const Budgets& budgets) {
  validate(g, omega);
  std::uint64_t work = 0;
  for (const auto& sc : omega) {
    work += count_subsets_up_to(static_cast<int>((sc.fail & h).count()), level);
  }
  if (work > budgets.enumeration) {
    throw Error(ErrorKind::kEnumerationTooLarge,
                "violating-set enumeration exceeds " + std::to_string(budgets.enumeration));
  }
  std::map<EdgeSet, std::set<TerminalPair>> found;
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const std::vector<int> pool = (omega[j].fail & h).ids();
    for (int size = 0; size <= level; ++size) {
      for_each_subset(pool, size, idx(g.num_edges()), [&](const EdgeSet& f) {
        UnionFind uf(g.num_vertices());
        (h - f).for_each([&](int id) { uf.unite(g.edge(id).u, g.edge(id).v); });
        for (const auto& pr : omega[j].pairs) {
          if (uf.find(pr.first) == uf.find(pr.second)) continue;
          if (size < level) {
            throw Error(ErrorKind::kPriorLevelNotSatisfied,
                        "scenario " + std::to_string(j) + " already fails with " +
                            std::to_string(size) + " edges removed");
          }
          found[f].insert(normalized(pr));
        }
        return true;
      });
    }
  }
  std::vector<ViolatingSet> out;
  for (const auto& [f, pairs] : found) {
    for (const auto& pr : pairs) out.push_back({f, pr});
  }
  return out;
}

std::vector<BulkScenario> expand_flex_to_bulk(const FaultGraph& g,
                                              const std::vector<FlexRequirement>& reqs,
                                              const Budgets& budgets) {
  validate(g, reqs);
  int width = 0;
  for (const auto& r : reqs) width = std::max(width, r.p + r.q - 1);
  if (count_subsets_up_to(g.num_edges(), width) > budgets.enumeration) {
    throw Error(ErrorKind::kWidthBudgetExceeded,
                "flex expansion of width " + std::to_string(width) + " exceeds budget");
  }
  std::vector<int> pool(idx(g.num_edges()));
  for (int i = 0; i < g.num_edges(); ++i) pool[idx(i)] = i;
  std::vector<BulkScenario> out;
  for (int size = 0; size <= width; ++size) {
    for_each_subset(pool, size, idx(g.num_edges()), [&](const EdgeSet& f) {
      const int safe = static_cast<int>((f & g.safe_edges()).count());
      BulkScenario sc{f, {}};
      for (const auto& r : reqs) {
        if (safe <= r.p - 1 && size <= r.p + r.q - 1) sc.pairs.emplace_back(r.s, r.t);
      }
      if (!sc.pairs.empty()) out.push_back(std::move(sc));
      return true;
    });
  }
  return out;
}

std::vector<BulkScenario> expand_rsndp_to_bulk(const FaultGraph& g,
                                               const std::vector<RelativeRequirement>& reqs,
                                               const Budgets& budgets) {
  validate(g, reqs);
  int width = 0;
  for (const auto& r : reqs) width = std::max(width, r.r - 1);
  if (count_subsets_up_to(g.num_edges(), width) > budgets.enumeration) {
    throw Error(ErrorKind::kWidthBudgetExceeded,
                "relative expansion of width " + std::to_string(width) + " exceeds budget");
  }
  std::vector<int> pool(idx(g.num_edges()));
  for (int i = 0; i < g.num_edges(); ++i) pool[idx(i)] = i;
  std::vector<BulkScenario> out;
  for (int size = 0; size <= width; ++size) {
    for_each_subset(pool, size, idx(g.num_edges()), [&](const EdgeSet& f) {
      UnionFind uf(g.num_vertices());
      (g.all_edges() - f).for_each([&](int id) { uf.unite(g.edge(id).u, g.edge(id).v); });
      BulkScenario sc{f, {}};
      for (const auto& r : reqs) {
        if (r.r > size && uf.find(r.s) == uf.find(r.t)) sc.pairs.emplace_back(r.s, r.t);
      }
      if (!sc.pairs.empty()) out.push_back(std::move(sc));
      return true;
    });
  }
  return out;
}

void for_each_subset(const std::vector<int>& pool, int k, std::size_t universe,
                     const std::function<bool(const EdgeSet&)>& fn) {
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return;
  std::vector<int> pick(idx(k));
  for (int i = 0; i < k; ++i) pick[idx(i)] = i;
  while (true) {
    EdgeSet f(universe);
    for (int i : pick) f.insert(pool[idx(i)]);
    if (!fn(f)) return;
    int i = k - 1;
    while (i >= 0 && pick[idx(i)] == n - k + i) --i;
    if (i < 0) return;
    ++pick[idx(i)];
    for (int j = i + 1; j < k; ++j) pick[idx(j)] = pick[idx(j - 1)] + 1;
  }
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (r > (~std::uint64_t{0}) / num) return ~std::uint64_t{0};
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::uint64_t count_subsets_up_to(int n, int k) {
  std::uint64_t total = 0;
  for (int i = 0; i <= std::min(n, k); ++i) {
    const auto b = binomial(n, i);
    if (total > ~std::uint64_t{0} - b) return ~std::uint64_t{0};
    total += b;
  }
  return total;
}

}  // namespace flexnd
