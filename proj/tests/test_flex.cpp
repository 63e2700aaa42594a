#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "flexnd/cut_cover.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/flex.hpp"
#include "support.hpp"

using namespace flexnd;

namespace {

double kruskal(const FaultGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.num_edges()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.edge(a).cost < g.edge(b).cost; });
  UnionFind uf(g.num_vertices());
  double total = 0.0;
  for (int id : order) {
    if (uf.unite(g.edge(id).u, g.edge(id).v)) total += g.edge(id).cost;
  }
  return total;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidArgument;
}

// Random graph that is (p,q)-flex-connected between all pairs (or s-t when
// st is set); retries with fresh draws.
FaultGraph feasible_graph(Rng& rng, int n, int m, int p, int q, bool st) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    FaultGraph g = testing::random_graph(rng, n, m, 0.5);
    const auto reqs = st ? std::vector<FlexRequirement>{{0, 1, p, q}}
                         : all_pairs_requirement(n, p, q);
    if (is_flex_feasible(g, reqs, g.all_edges()).feasible) return g;
  }
  FAIL("no feasible random graph");
  return {};
}

// Four-vertex counterexample graphs on x1=0, x2=1, x3=2, y=3: multiplicities (safe, unsafe) per
// edge x1x2, x2x3, x1y, x3y.
FaultGraph four_vertex(std::array<std::pair<int, int>, 4> mult) {
  const std::array<std::pair<int, int>, 4> ends{{{0, 1}, {1, 2}, {0, 3}, {2, 3}}};
  GraphBuilder b(4);
  for (std::size_t i = 0; i < 4; ++i) {
    auto [u, v] = ends[i];
    for (int k = 0; k < mult[i].first; ++k) b.add_safe(u, v);
    for (int k = 0; k < mult[i].second; ++k) b.add_unsafe(u, v);
  }
  return b.build();
}

constexpr VertexMask kA = 0b0011;  // {x1, x2}
constexpr VertexMask kB = 0b0110;  // {x2, x3}

CutFamily stage_family(const FaultGraph& g, int i, int total) {
  const EdgeSet f = g.all_edges();
  return CutFamily(
      g, f,
      [&g, f, i, total](VertexMask s) {
        const CutCounts c = boundary_counts(g, f, s);
        return c.safe == i && c.total() == total;
      },
      CutDomain::kAllCuts);
}

}  // namespace

TEST_CASE("stage plans follow the uncrossable cases") {
  CHECK_FALSE(plan_stages(2, 5).staged());
  CHECK_FALSE(plan_stages(7, 1).staged());
  CHECK_FALSE(plan_stages(1, 3).staged());
  CHECK(plan_stages(3, 2).stages == std::vector<int>{0, 1, 2});
  CHECK(plan_stages(5, 3).stages.size() == 5);
  CHECK(plan_stages(4, 4).stages == std::vector<int>{0, 1, 2, 3});
  CHECK(kind_of([] { plan_stages(3, 4); }) == ErrorKind::kUnsupportedParameters);
  CHECK(kind_of([] { plan_stages(4, 5); }) == ErrorKind::kUnsupportedParameters);
  CHECK(kind_of([] { plan_stages(1, 4); }) == ErrorKind::kUnsupportedParameters);
  CHECK(kind_of([] { plan_stages(0, 1); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("guarantee bookkeeping") {
  CHECK(fgc_guarantee(2, 3, true) == doctest::Approx(7));
  CHECK(fgc_guarantee(5, 1, true) == doctest::Approx(3));
  CHECK(fgc_guarantee(3, 2, true) == doctest::Approx(9));
  CHECK(fgc_guarantee(3, 3, true) == doctest::Approx(15));
  CHECK(fgc_guarantee(4, 4, true) == doctest::Approx(27));
  CHECK(fgc_guarantee(2, 2, false) == doctest::Approx(8));
  CHECK(fgc_published_ratio(2, 2) == doctest::Approx(6));
  CHECK(fgc_published_ratio(3, 2) == doctest::Approx(10));
  CHECK(fgc_published_ratio(3, 3) == doctest::Approx(16));
  CHECK(fgc_published_ratio(4, 4) == doctest::Approx(28));
  CHECK(fgc_published_ratio(3, 1) == doctest::Approx(4));
  CHECK(fgc_published_ratio(3, 4) == 0.0);
  // base 1, then per level j: seed p+j plus C(p(p+j), i) for i < p
  CHECK(flex_st_guarantee(2, 2) == doctest::Approx(1 + (3 + 1 + 6) + (4 + 1 + 8)));
  for (int p = 1; p <= 4; ++p) {
    for (int q = 1; q <= 4; ++q) {
      if (fgc_published_ratio(p, q) > 0 && (p != 1 || q <= 3)) {
        CHECK(fgc_guarantee(p, q, true) <= fgc_published_ratio(p, q));
      }
    }
  }
}

TEST_CASE("(1,0) spanning solution is a minimum spanning tree") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const FaultGraph g = testing::random_graph(rng, 6, 10);
    const FlexResult r = solve_fgc(g, 1, 0);
    CHECK(r.base_exact);
    CHECK(r.cost == doctest::Approx(kruskal(g)));
    CHECK(is_spanning_connected(g, r.edges));
    FlexOptions pd;
    pd.exact_base = false;
    const FlexResult r2 = solve_fgc(g, 1, 0, pd);
    CHECK_FALSE(r2.base_exact);
    CHECK(r2.cost <= 2 * kruskal(g) + 1e-9);
  }
}

TEST_CASE("all-safe graphs need nothing beyond the base") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const FaultGraph g = testing::random_graph(rng, 5, 12, 1.0);
    if (!is_flex_feasible(g, all_pairs_requirement(5, 2, 3), g.all_edges()).feasible) continue;
    const FlexResult r = solve_fgc(g, 2, 3);
    CHECK(r.cost == doctest::Approx(r.base_cost));
    for (const StageRecord& s : r.stages) CHECK(s.members == 0);
  }
}

TEST_CASE("infeasible input is rejected before any work") {
  GraphBuilder b(3);
  b.add_unsafe(0, 1);
  b.add_unsafe(1, 2);
  b.add_unsafe(0, 2);
  const FaultGraph g = b.build();
  CHECK(kind_of([&] { solve_fgc(g, 2, 1); }) == ErrorKind::kInfeasibleInstance);
  CHECK(kind_of([&] { solve_flex_st(g, 0, 1, 2, 1); }) == ErrorKind::kInfeasibleInstance);
}

TEST_CASE("FGC output is feasible and within its ratio") {
  Rng rng(13);
  const std::vector<std::pair<int, int>> cases{{2, 1}, {2, 2}, {3, 1}, {1, 2}, {2, 3}};
  for (auto [p, q] : cases) {
    for (int trial = 0; trial < 4; ++trial) {
      const int n = 4 + trial % 2;
      const FaultGraph g = feasible_graph(rng, n, 13, p, q, false);
      const FlexResult r = solve_fgc(g, p, q);
      const auto reqs = all_pairs_requirement(n, p, q);
      CHECK(is_flex_feasible(g, reqs, r.edges).feasible);
      CHECK(testing::brute_flex(g, reqs, r.edges));
      const double opt = exact_solve(g, FlexProblem{reqs}).cost;
      CHECK(r.cost >= opt - 1e-9);
      CHECK(r.cost <= r.guarantee * opt + 1e-9);
      CHECK(r.cost <= fgc_published_ratio(p, q) * opt + 1e-9);
    }
  }
}

TEST_CASE("every stage family is uncrossable and primal-dual stays within twice its dual") {
  Rng rng(14);
  const std::vector<std::pair<int, int>> cases{{2, 2}, {2, 3}, {2, 4}, {3, 2},
                                               {3, 3}, {1, 3}, {4, 2}};
  int families = 0;
  for (auto [p, q] : cases) {
    for (int trial = 0; trial < 3; ++trial) {
      const int n = 4 + trial % 2;
      const FaultGraph g = feasible_graph(rng, n, 4 * p + 2 * q + 2, p, q, false);
      FlexOptions opt;
      opt.exact_base = false;
      opt.hook = [&](const StageEvent& ev) {
        ++families;
        CHECK_FALSE(check_uncrossable(*ev.family).has_value());
        CHECK(g.cost(ev.added) <= 2 * ev.dual_lower_bound + 1e-9);
        CHECK(ev.family->covered_by(ev.added));
      };
      const FlexResult r = solve_fgc(g, p, q, opt);
      CHECK(is_flex_feasible(g, all_pairs_requirement(n, p, q), r.edges).feasible);
    }
  }
  CHECK(families > 0);
}

TEST_CASE("(4,4) spanning solutions on dense graphs") {
  Rng rng(15);
  for (int trial = 0; trial < 2; ++trial) {
    const FaultGraph g = feasible_graph(rng, 4, 30, 4, 4, false);
    FlexOptions opt;
    opt.hook = [&](const StageEvent& ev) {
      CHECK_FALSE(check_uncrossable(*ev.family).has_value());
    };
    const FlexResult r = solve_fgc(g, 4, 4, opt);
    CHECK(is_flex_feasible(g, all_pairs_requirement(4, 4, 4), r.edges).feasible);
    CHECK(r.guarantee <= 28);
  }
}

TEST_CASE("(3,1) -> (3,2) violated cuts cross badly") {
  const FaultGraph g = four_vertex({{{0, 2}, {1, 1}, {1, 1}, {2, 0}}});
  const auto reqs = all_pairs_requirement(4, 3, 2);
  const CutFamily fam = violated_cuts_flex_aug(g, reqs, g.all_edges());
  CHECK(boundary_counts(g, g.all_edges(), kA).safe == 2);
  CHECK(boundary_counts(g, g.all_edges(), kA).unsafe == 2);
  CHECK(boundary_counts(g, g.all_edges(), kB).safe == 2);
  CHECK(boundary_counts(g, g.all_edges(), kB).unsafe == 2);
  CHECK(boundary_counts(g, g.all_edges(), kA | kB).safe == 3);
  CHECK(boundary_counts(g, g.all_edges(), kB & ~kA).safe == 3);
  CHECK(fam.contains(kA));
  CHECK(fam.contains(kB));
  CHECK_FALSE(uncrosses(fam, kA, kB));
  CHECK(check_uncrossable(fam).has_value());
}

TEST_CASE("(3,3) -> (3,4): the top stage is not uncrossable") {
  const FaultGraph g = four_vertex({{{0, 4}, {1, 2}, {1, 2}, {2, 0}}});
  CHECK(is_flex_feasible(g, all_pairs_requirement(4, 3, 3), g.all_edges()).feasible);
  const CutFamily fam = stage_family(g, 2, 6);
  for (VertexMask s : {kA, kB}) {
    CHECK(boundary_counts(g, g.all_edges(), s).safe == 2);
    CHECK(boundary_counts(g, g.all_edges(), s).unsafe == 4);
  }
  CHECK(boundary_counts(g, g.all_edges(), kA | kB).safe == 3);
  CHECK(boundary_counts(g, g.all_edges(), kB & ~kA).safe == 3);
  CHECK(boundary_counts(g, g.all_edges(), kA & kB).total() == 7);
  CHECK(boundary_counts(g, g.all_edges(), kA & ~kB).total() == 7);
  CHECK(fam.contains(kA));
  CHECK(fam.contains(kB));
  CHECK_FALSE(uncrosses(fam, kA, kB));
  const CutFamily all = violated_cuts_flex_aug(g, all_pairs_requirement(4, 3, 4), g.all_edges());
  for (VertexMask s : {kA | kB, kA & kB, kA & ~kB, kB & ~kA}) CHECK_FALSE(all.contains(s));
}

TEST_CASE("(4,4) -> (4,5): stage 3 is not uncrossable") {
  const FaultGraph g = four_vertex({{{0, 5}, {1, 3}, {2, 2}, {3, 0}}});
  CHECK(is_flex_feasible(g, all_pairs_requirement(4, 4, 4), g.all_edges()).feasible);
  const CutFamily fam = stage_family(g, 3, 8);
  CHECK(fam.contains(kA));
  CHECK(fam.contains(kB));
  CHECK(boundary_counts(g, g.all_edges(), kA | kB).safe >= 4);
  CHECK(boundary_counts(g, g.all_edges(), kB & ~kA).safe >= 4);
  CHECK(boundary_counts(g, g.all_edges(), kA & kB).total() == 9);
  CHECK(boundary_counts(g, g.all_edges(), kA & ~kB).total() == 9);
  CHECK_FALSE(uncrosses(fam, kA, kB));
  // Cuts of size p+q-1 all carry at least 3 safe edges, so A and B really
  // are what stage 3 sees.
  for_each_cut(4, CutDomain::kAllCuts, -1, -1, [&](VertexMask s) {
    const CutCounts c = boundary_counts(g, g.all_edges(), s);
    if (c.total() == 8) CHECK(c.safe >= 3);
  });
}

TEST_CASE("Flex-ST subfamilies are rings and together give the whole stage") {
  Rng rng(16);
  const std::vector<std::pair<int, int>> cases{{2, 1}, {2, 2}, {1, 3}, {3, 1}, {3, 2}};
  int rings = 0;
  for (auto [p, q] : cases) {
    for (int trial = 0; trial < 4; ++trial) {
      const int n = 5 + trial % 2;
      const FaultGraph g = feasible_graph(rng, n, 3 * (p + q) + 4, p, q, true);
      std::map<std::pair<int, int>, std::set<VertexMask>> seen;
      std::map<std::pair<int, int>, EdgeSet> before;
      FlexOptions opt;
      opt.hook = [&](const StageEvent& ev) {
        ++rings;
        CHECK_FALSE(check_ring_family(*ev.family).has_value());
        CHECK(static_cast<int>(ev.paths.size()) == ev.stage);
        for (VertexMask a : ev.family->members()) seen[{ev.level, ev.stage}].insert(a);
        before.insert_or_assign({ev.level, ev.stage}, *ev.before);
      };
      const FlexResult r = solve_flex_st(g, 0, 1, p, q, opt);
      const std::vector<FlexRequirement> reqs{{0, 1, p, q}};
      CHECK(is_flex_feasible(g, reqs, r.edges).feasible);
      CHECK(testing::brute_flex(g, reqs, r.edges));
      for (const auto& [key, f] : before) {
        const auto [level, i] = key;
        std::set<VertexMask> ci;
        for_each_cut(n, CutDomain::kSourceSide, 0, 1, [&](VertexMask a) {
          const CutCounts c = boundary_counts(g, f, a);
          if (c.safe == i && c.total() == p + level - 1) ci.insert(a);
        });
        CHECK(ci == seen[key]);
      }
      const double opt_cost = exact_solve(g, FlexProblem{reqs}).cost;
      CHECK(r.cost <= r.guarantee * opt_cost + 1e-9);
    }
  }
  CHECK(rings > 0);
}

TEST_CASE("Flex-ST parameter condition") {
  GraphBuilder b(2);
  b.add_parallel(0, 1, 8, 1.0, Safety::kSafe);
  const FaultGraph g = b.build();
  CHECK(kind_of([&] { solve_flex_st(g, 0, 1, 4, 4); }) == ErrorKind::kParameterConditionViolated);
  CHECK(kind_of([&] { solve_flex_st(g, 0, 1, 5, 5); }) == ErrorKind::kParameterConditionViolated);
  for (auto [p, q] : {std::pair{3, 3}, std::pair{3, 4}, std::pair{1, 5}}) {
    const FlexResult r = solve_flex_st(g, 0, 1, p, q);
    CHECK(r.cost == doctest::Approx(p));
  }
  CHECK(kind_of([&] { solve_flex_st(g, 0, 0, 1, 1); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("(2,2)-Flex-ST seed trichotomy and three ring covers") {
  Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 5 + trial % 2;
    const FaultGraph g = feasible_graph(rng, n, 14, 2, 2, true);
    const CapSeed seed = cap_st_seed(g, 0, 1, 2, 1, 4);
    CHECK(seed.flow.value == doctest::Approx(4));
    const PathBundle bundle = PathBundle::from_flow(g, seed.flow);
    CHECK(bundle.size() == 4);
    for_each_cut(n, CutDomain::kSourceSide, 0, 1, [&](VertexMask a) {
      const CutCounts c = boundary_counts(g, seed.edges, a);
      CHECK((c.safe >= 2 || c.total() >= 4 || (c.safe == 1 && c.unsafe == 2)));
    });
    FlexOptions opt;
    int families = 0;
    opt.hook = [&](const StageEvent& ev) {
      ++families;
      CHECK(ev.paths.size() == 1);
      CHECK(ev.paths[0] < 3);
      CHECK_FALSE(check_ring_family(*ev.family).has_value());
    };
    const FlexResult r = solve_flex_st_22(g, 0, 1, opt);
    CHECK(families <= 3);
    const std::vector<FlexRequirement> reqs{{0, 1, 2, 2}};
    CHECK(is_flex_feasible(g, reqs, r.edges).feasible);
    const double opt_cost = exact_solve(g, FlexProblem{reqs}).cost;
    CHECK(r.cost <= kFlexSt22Guarantee * opt_cost + 1e-9);
  }
}

TEST_CASE("membership needs each chosen path to cross once on a safe edge") {
  // s=0, t=1; two safe s-t edges and a path through 2 with unsafe edges.
  GraphBuilder b(3);
  const int e0 = b.add_safe(0, 1);
  b.add_safe(0, 1);
  b.add_unsafe(0, 2);
  b.add_unsafe(2, 1);
  const FaultGraph g = b.build();
  Flow f;
  f.source = 0;
  f.sink = 1;
  f.value = 3;
  f.on_edge = {1, 1, 1, 1};
  const PathBundle bundle = PathBundle::from_flow(g, f);
  REQUIRE(bundle.size() == 3);
  int p0 = -1;
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    if (bundle.paths[i].edges == std::vector<int>{e0}) p0 = static_cast<int>(i);
  }
  REQUIRE(p0 >= 0);
  // {s}: 2 safe + 1 unsafe. For (3,1), total 3 = p+q-1 and safe 2 < 3.
  const std::vector<int> two_safe_paths = [&] {
    std::vector<int> out;
    for (std::size_t i = 0; i < bundle.size(); ++i) {
      if (g.edge(bundle.paths[i].edges.front()).safe()) out.push_back(static_cast<int>(i));
    }
    return out;
  }();
  CHECK(membership_CiQ(g, g.all_edges(), 3, 1, bundle, two_safe_paths, vertex_bit(0)));
  const std::vector<int> one{p0};
  CHECK_FALSE(membership_CiQ(g, g.all_edges(), 3, 1, bundle, one, vertex_bit(0)));
  CHECK_FALSE(membership_CiQ(g, g.all_edges(), 3, 1, bundle, two_safe_paths, vertex_bit(1)));
}
