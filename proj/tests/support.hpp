#pragma once

// Test-only helpers: random instances and definition-level brute-force
// oracles that share no code with the library's own checkers.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "flexnd/graph.hpp"
#include "flexnd/lp.hpp"
#include "flexnd/oracles.hpp"
#include "flexnd/rng.hpp"

namespace testing {

using namespace flexnd;

// Connected multigraph: a random spanning tree plus extra random edges.
inline FaultGraph random_graph(Rng& rng, int n, int m, double safe_prob = 0.5,
                               int max_cost = 9) {
  GraphBuilder b(n);
  for (int v = 1; v < n; ++v) {
    b.add(rng.range(0, v - 1), v, rng.range(1, max_cost),
          rng.chance(safe_prob) ? Safety::kSafe : Safety::kUnsafe);
  }
  for (int i = n - 1; i < m; ++i) {
    int u = rng.range(0, n - 1);
    int v = rng.range(0, n - 2);
    if (v >= u) ++v;
    b.add(u, v, rng.range(1, max_cost),
          rng.chance(safe_prob) ? Safety::kSafe : Safety::kUnsafe);
  }
  return b.build();
}

inline EdgeSet random_subset(Rng& rng, const FaultGraph& g, double keep) {
  EdgeSet h = g.empty_set();
  for (int id = 0; id < g.num_edges(); ++id) {
    if (rng.chance(keep)) h.insert(id);
  }
  return h;
}

inline bool crosses(const Edge& e, std::uint64_t s) {
  return (((s >> e.u) ^ (s >> e.v)) & 1U) != 0;
}

inline double brute_min_cut(const FaultGraph& g, const std::vector<double>& cap, int s,
                            int t) {
  double best = 1e300;
  const std::uint64_t full = (std::uint64_t{1} << g.num_vertices()) - 1;
  for (std::uint64_t S = 1; S < full; ++S) {
    if (!((S >> s) & 1U) || ((S >> t) & 1U)) continue;
    double v = 0;
    for (const Edge& e : g.edges()) {
      if (crosses(e, S)) v += cap[static_cast<std::size_t>(e.id)];
    }
    best = std::min(best, v);
  }
  return best;
}

// Every B of at most q unsafe edges of H, every cut separating the pair:
// at least p edges of H - B must cross.
inline bool brute_flex(const FaultGraph& g, const std::vector<FlexRequirement>& reqs,
                       const EdgeSet& h) {
  std::vector<int> unsafe;
  h.for_each([&](int id) {
    if (!g.edge(id).safe()) unsafe.push_back(id);
  });
  const std::uint64_t full = (std::uint64_t{1} << g.num_vertices()) - 1;
  for (const auto& r : reqs) {
    for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << unsafe.size()); ++bm) {
      if (std::popcount(bm) > r.q) continue;
      std::vector<char> removed(static_cast<std::size_t>(g.num_edges()), 0);
      for (std::size_t i = 0; i < unsafe.size(); ++i) {
        if ((bm >> i) & 1U) removed[static_cast<std::size_t>(unsafe[i])] = 1;
      }
      for (std::uint64_t S = 1; S < full; ++S) {
        if (!((S >> r.s) & 1U) || ((S >> r.t) & 1U)) continue;
        int c = 0;
        h.for_each([&](int id) {
          if (!removed[static_cast<std::size_t>(id)] && crosses(g.edge(id), S)) ++c;
        });
        if (c < r.p) return false;
      }
    }
  }
  return true;
}

inline bool connected_without(const FaultGraph& g, const EdgeSet& h, const EdgeSet& fail,
                              int u, int v) {
  std::vector<int> comp(static_cast<std::size_t>(g.num_vertices()));
  for (int i = 0; i < g.num_vertices(); ++i) comp[static_cast<std::size_t>(i)] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    h.for_each([&](int id) {
      if (fail.contains(id)) return;
      auto& a = comp[static_cast<std::size_t>(g.edge(id).u)];
      auto& b = comp[static_cast<std::size_t>(g.edge(id).v)];
      if (a != b) {
        a = b = std::min(a, b);
        changed = true;
      }
    });
  }
  return comp[static_cast<std::size_t>(u)] == comp[static_cast<std::size_t>(v)];
}

inline bool brute_bulk(const FaultGraph& g, const std::vector<BulkScenario>& omega,
                       const EdgeSet& h) {
  for (const auto& sc : omega) {
    for (auto [u, v] : sc.pairs) {
      if (!connected_without(g, h, sc.fail, u, v)) return false;
    }
  }
  return true;
}

// Every F subset of E with |F| < r.
inline bool brute_rsndp(const FaultGraph& g, const std::vector<RelativeRequirement>& reqs,
                        const EdgeSet& h) {
  const int m = g.num_edges();
  for (std::uint64_t fm = 0; fm < (std::uint64_t{1} << m); ++fm) {
    EdgeSet f = EdgeSet::from_word(static_cast<std::size_t>(m), fm);
    const int size = std::popcount(fm);
    for (const auto& r : reqs) {
      if (size >= r.r) continue;
      if (connected_without(g, g.all_edges(), f, r.s, r.t) &&
          !connected_without(g, h, f, r.s, r.t)) {
        return false;
      }
    }
  }
  return true;
}

// Cheapest feasible subset by plain enumeration over all 2^m edge sets.
template <typename Feasible>
double brute_opt(const FaultGraph& g, Feasible&& feasible) {
  const int m = g.num_edges();
  double best = 1e300;
  for (std::uint64_t hm = 0; hm < (std::uint64_t{1} << m); ++hm) {
    const EdgeSet h = EdgeSet::from_word(static_cast<std::size_t>(m), hm);
    const double c = g.cost(h);
    if (c < best && feasible(h)) best = c;
  }
  return best;
}

// s=0, t=1, v_i = 2..k+2; two unsafe s-v_i edges of cost 1/2, one safe v_i-t of cost k+1.
inline FaultGraph gap_graph(int k) {
  GraphBuilder b(k + 3);
  for (int i = 0; i <= k; ++i) {
    b.add_unsafe(0, 2 + i, 0.5);
    b.add_unsafe(0, 2 + i, 0.5);
    b.add_safe(2 + i, 1, k + 1.0);
  }
  return b.build();
}

inline std::vector<BulkScenario> random_scenarios(Rng& rng, const FaultGraph& g, int count,
                                                  int width) {
  std::vector<BulkScenario> omega;
  const int n = g.num_vertices();
  for (int j = 0; j < count; ++j) {
    BulkScenario sc{g.empty_set(), {}};
    const int size = rng.range(0, width);
    for (int k = 0; k < size; ++k) sc.fail.insert(rng.range(0, g.num_edges() - 1));
    const int pairs = rng.range(1, 2);
    for (int k = 0; k < pairs; ++k) {
      const int u = rng.range(0, n - 1);
      int v = rng.range(0, n - 2);
      if (v >= u) ++v;
      sc.pairs.emplace_back(u, v);
    }
    omega.push_back(std::move(sc));
  }
  return omega;
}

// Largest violation over every separating cut and every B of at most q
// unsafe boundary edges, after the capacity rows; 0 when x is feasible.
inline std::pair<RowClass, double> brute_flex_violation(const FaultGraph& g,
                                                        const std::vector<FlexRequirement>& reqs,
                                                        const std::vector<double>& x) {
  const int n = g.num_vertices();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  double cap_worst = 0.0;
  double cut_worst = 0.0;
  for (const auto& r : reqs) {
    for (std::uint64_t s = 1; s < full; ++s) {
      if (!((s >> r.s) & 1U) || ((s >> r.t) & 1U)) continue;
      std::vector<int> cross;
      double weighted = 0.0;
      for (const Edge& e : g.edges()) {
        if (!crosses(e, s)) continue;
        cross.push_back(e.id);
        weighted += (e.safe() ? r.p + r.q : r.p) * x[static_cast<std::size_t>(e.id)];
      }
      cap_worst = std::max(cap_worst, r.p * (r.p + r.q) - weighted);
      for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << cross.size()); ++bm) {
        if (std::popcount(bm) > r.q) continue;
        double sum = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < cross.size(); ++i) {
          const bool in_b = (bm >> i) & 1U;
          if (in_b && g.edge(cross[i]).safe()) ok = false;
          if (!in_b) sum += x[static_cast<std::size_t>(cross[i])];
        }
        if (ok) cut_worst = std::max(cut_worst, r.p - sum);
      }
    }
  }
  if (cap_worst > kSeparationTol) return {RowClass::kFlexCapacity, cap_worst};
  return {RowClass::kFlexCut, cut_worst};
}

}  // namespace testing
