#include "flexnd/generate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "flexnd/error.hpp"
#include "flexnd/lp.hpp"
#include "flexnd/rng.hpp"

namespace flexnd {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); }

Safety draw_safety(Rng& rng, double safe_fraction) {
  return rng.chance(safe_fraction) ? Safety::kSafe : Safety::kUnsafe;
}

FaultGraph random_multigraph(const GenParams& gp, Rng& rng) {
  GraphBuilder b(gp.n);
  for (int v = 1; v < gp.n; ++v) {
    b.add(rng.range(0, v - 1), v, rng.range(1, gp.max_cost), draw_safety(rng, gp.safe_fraction));
  }
  for (int i = gp.n - 1; i < gp.m; ++i) {
    const int u = rng.range(0, gp.n - 1);
    int v = rng.range(0, gp.n - 2);
    if (v >= u) ++v;
    b.add(u, v, rng.range(1, gp.max_cost), draw_safety(rng, gp.safe_fraction));
  }
  return b.build();
}

// Points in the unit square; a Euclidean MST first, then the remaining pairs
// by length, wrapping around to parallel copies when m exceeds n(n-1)/2.
FaultGraph random_geometric(const GenParams& gp, Rng& rng) {
  std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(gp.n));
  for (auto& pt : pts) pt = {rng.unit(), rng.unit()};
  struct Pair {
    double d;
    int u, v;
  };
  std::vector<Pair> pairs;
  for (int u = 0; u < gp.n; ++u) {
    for (int v = u + 1; v < gp.n; ++v) {
      const auto& a = pts[static_cast<std::size_t>(u)];
      const auto& c = pts[static_cast<std::size_t>(v)];
      pairs.push_back({std::hypot(a[0] - c[0], a[1] - c[1]), u, v});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& c) { return a.d < c.d; });
  auto cost_of = [&](double d) {
    return std::clamp(static_cast<int>(std::lround(d * gp.max_cost)), 1, gp.max_cost);
  };
  GraphBuilder b(gp.n);
  UnionFind uf(gp.n);
  std::vector<bool> used(pairs.size(), false);
  int m = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (uf.unite(pairs[i].u, pairs[i].v)) {
      b.add(pairs[i].u, pairs[i].v, cost_of(pairs[i].d), draw_safety(rng, gp.safe_fraction));
      used[i] = true;
      ++m;
    }
  }
  for (std::size_t i = 0; m < gp.m; i = (i + 1) % pairs.size()) {
    if (used[i]) {
      used[i] = false;  // taken by the tree; next lap may copy it
      continue;
    }
    b.add(pairs[i].u, pairs[i].v, cost_of(pairs[i].d), draw_safety(rng, gp.safe_fraction));
    ++m;
  }
  return b.build();
}

TerminalPair random_pair(Rng& rng, int n) {
  const int u = rng.range(0, n - 1);
  int v = rng.range(0, n - 2);
  if (v >= u) ++v;
  return {std::min(u, v), std::max(u, v)};
}

Problem random_problem(const GenParams& gp, const FaultGraph& g, Rng& rng) {
  if (gp.problem == "fgc") return FlexProblem{all_pairs_requirement(gp.n, gp.p, gp.q)};
  if (gp.problem == "flex-st") return FlexProblem{{{0, gp.n - 1, gp.p, gp.q}}};
  if (gp.problem == "flex-sndp") {
    FlexProblem f;
    for (int i = 0; i < gp.pairs; ++i) {
      auto [s, t] = random_pair(rng, gp.n);
      f.pairs.push_back({s, t, gp.p, gp.q});
    }
    return f;
  }
  if (gp.problem == "rsndp") {
    RelativeProblem r;
    for (int i = 0; i < gp.pairs; ++i) {
      auto [s, t] = random_pair(rng, gp.n);
      r.pairs.push_back({s, t, gp.r});
    }
    return r;
  }
  if (gp.problem == "bulk") {
    BulkProblem b;
    for (int j = 0; j < gp.scenarios; ++j) {
      BulkScenario sc{g.empty_set(), {}};
      const int size = rng.range(0, std::min(gp.width, g.num_edges()));
      while (static_cast<int>(sc.fail.count()) < size) {
        sc.fail.insert(rng.range(0, g.num_edges() - 1));
      }
      const int count = rng.range(1, std::max(1, gp.pairs));
      for (int i = 0; i < count; ++i) sc.pairs.push_back(random_pair(rng, gp.n));
      b.scenarios.push_back(std::move(sc));
    }
    return b;
  }
  bad("unknown problem '" + gp.problem + "'");
}

// Multiplicities (safe, unsafe) on x1x2, x2x3, x1y, x3y with x1..x3 = 0..2, y = 3.
FaultGraph four_vertex(const std::array<std::pair<int, int>, 4>& mult) {
  const std::array<std::pair<int, int>, 4> ends{{{0, 1}, {1, 2}, {0, 3}, {2, 3}}};
  GraphBuilder b(4);
  for (std::size_t i = 0; i < 4; ++i) {
    if (mult[i].first > 0) b.add_parallel(ends[i].first, ends[i].second, mult[i].first, 1.0, Safety::kSafe);
    if (mult[i].second > 0) b.add_parallel(ends[i].first, ends[i].second, mult[i].second, 1.0, Safety::kUnsafe);
  }
  return b.build();
}

Instance counterexample(const std::string& kind) {
  Instance inst;
  inst.name = kind;
  if (kind == "figure-1") {
    inst.graph = four_vertex({{{0, 2}, {1, 1}, {1, 1}, {2, 0}}});
    inst.problem = FlexProblem{all_pairs_requirement(4, 3, 1)};
  } else if (kind == "figure-3") {
    inst.graph = four_vertex({{{0, 4}, {1, 2}, {1, 2}, {2, 0}}});
    inst.problem = FlexProblem{all_pairs_requirement(4, 3, 3)};
  } else {
    inst.graph = four_vertex({{{0, 5}, {1, 3}, {2, 2}, {3, 0}}});
    inst.problem = FlexProblem{all_pairs_requirement(4, 4, 4)};
  }
  return inst;
}

}  // namespace

Instance generate(const GenParams& gp) {
  if (gp.kind == "appendix-a") {
    if (gp.k < 1) bad("appendix-a needs k >= 1");
    return {"appendix-a-" + std::to_string(gp.k), gap_instance(gp.k),
            FlexProblem{{{0, 1, 1, gp.k}}}};
  }
  if (gp.kind == "figure-1" || gp.kind == "figure-3" || gp.kind == "figure-4") {
    return counterexample(gp.kind);
  }
  const bool geometric = gp.kind == "random-geometric";
  if (!geometric && gp.kind != "random-multigraph") bad("unknown kind '" + gp.kind + "'");
  if (gp.n < 2 || gp.n > kMaxVertices) bad("n out of range");
  if (gp.m < gp.n - 1) bad("m must be at least n-1");
  if (gp.max_cost < 1 || gp.safe_fraction < 0.0 || gp.safe_fraction > 1.0) bad("bad cost or safety parameters");

  const std::string name = gp.kind + "-" + gp.problem + "-n" + std::to_string(gp.n) + "-m" +
                           std::to_string(gp.m) + "-s" + std::to_string(gp.seed);
  const Budgets budgets = Budgets::from_env();
  for (int attempt = 0; attempt < gp.retries; ++attempt) {
    Rng rng(mix_seed(gp.seed, static_cast<std::uint64_t>(attempt)));
    FaultGraph g = geometric ? random_geometric(gp, rng) : random_multigraph(gp, rng);
    Problem problem = random_problem(gp, g, rng);
    if (is_feasible(g, problem, g.all_edges(), budgets)) return {name, std::move(g), std::move(problem)};
  }
  throw Error(ErrorKind::kCannotSatisfyFeasibility,
              name + ": no feasible draw in " + std::to_string(gp.retries) + " attempts");
}

}  // namespace flexnd
