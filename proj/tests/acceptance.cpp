// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "flexnd/bench.hpp"
#include "flexnd/bulk.hpp"
#include "flexnd/cut_cover.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/flex.hpp"
#include "flexnd/generate.hpp"
#include "flexnd/lp.hpp"
#include "support.hpp"

using namespace flexnd;

namespace {

constexpr double kCostTol = 1e-6;      // fractional cost and exact optimum comparisons
constexpr double kRatioTol = 1e-9;     // ratio and certificate inequalities
constexpr double kGapSeconds = 60.0;
constexpr double kRatioSeconds = 600.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::ostringstream failures;
  int failure_count = 0;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failure_count++ < 5) failures << " [" << what << "]";
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Instance gen(const std::string& problem, int n, int m, int p, int q, std::uint64_t seed,
             double safe_fraction = 0.5) {
  GenParams gp;
  gp.kind = "random-multigraph";
  gp.problem = problem;
  gp.n = n;
  gp.m = m;
  gp.p = p;
  gp.q = q;
  gp.seed = seed;
  gp.safe_fraction = safe_fraction;
  return generate(gp);
}

CutFamily counted_family(const FaultGraph& g, int safe, int total) {
  const EdgeSet f = g.all_edges();
  return CutFamily(g, f, [&g, f, safe, total](VertexMask s) {
    const CutCounts c = boundary_counts(g, f, s);
    return c.safe == safe && c.total() == total;
  });
}

std::string pair_text(const CutPair& ab) {
  return "A=" + std::to_string(ab.first) + ",B=" + std::to_string(ab.second);
}

void criterion_gap(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  for (int k : {2, 4, 15}) {
    const std::string tag = "k=" + std::to_string(k);
    GapOptions opts;
    opts.exact_up_to = 4;
    const GapReport r = gap_experiment(k, opts);
    out.require(r.fractional_clean, tag + " fractional vector separated");
    out.require(std::abs(r.fractional_cost - 3.0 * (k + 1)) <= kCostTol, tag + " fractional cost");
    if (k <= 4) {
      out.require(r.exact_opt.has_value(), tag + " exact optimum missing");
      if (r.exact_opt) {
        out.require(*r.exact_opt >= r.integral_lower_bound - kCostTol, tag + " exact below bound");
        out.detail << tag << " OPT=" << fmt(*r.exact_opt) << " ";
      }
      if (k == 2) out.require(r.exact_opt && std::abs(*r.exact_opt - 7.5) <= kCostTol, "k=2 OPT != 7.5");
    }
    if (k == 15) {
      out.require(r.bound_certified, "k=15 claim not certified");
      out.require(r.min_safe == 8, "k=15 min safe");
      out.require(r.candidates_rejected == 26333, "k=15 candidate count");
      out.require(std::abs(r.integral_lower_bound - 128.0) <= kCostTol, "k=15 integral bound");
      out.require(r.gap_lower_bound >= 8.0 / 3.0 - kRatioTol, "k=15 gap");
      out.detail << "k=15 candidates=" << r.candidates_rejected
                 << " integral>=" << fmt(r.integral_lower_bound) << " gap>=" << fmt(r.gap_lower_bound) << " ";
    }
    if (r.lp_optimum) out.detail << tag << " LP=" << fmt(*r.lp_optimum) << " ";
  }
  const double secs = seconds_since(start);
  out.require(secs < kGapSeconds, "runtime");
  out.detail << "time=" << fmt(secs) << "s";
}

struct RatioCase {
  std::string label;
  std::string problem;
  std::string algorithm;
  int p, q;
  int n_lo, n_hi, m_lo, m_hi;
  double m_per_vertex;  // raises the smallest m for larger n
  double safe_fraction;
  double ceiling;
};

void criterion_ratios(Outcome& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<RatioCase> cases{
      {"(2,2)-FGC", "fgc", "fgc", 2, 2, 5, 8, 12, 18, 2.0, 0.5, 8.0},
      {"(2,3)-FGC", "fgc", "fgc", 2, 3, 4, 7, 12, 18, 2.5, 0.5, 8.0},
      {"(3,2)-FGC", "fgc", "fgc", 3, 2, 4, 6, 15, 18, 2.5, 0.6, 10.0},
      {"(3,3)-FGC", "fgc", "fgc", 3, 3, 4, 6, 15, 18, 3.0, 0.6, 16.0},
      {"(4,4)-FGC", "fgc", "fgc", 4, 4, 4, 4, 16, 18, 4.0, 0.6, 28.0},
      {"(2,2)-Flex-ST", "flex-st", "flex-st-22", 2, 2, 5, 8, 12, 18, 1.5, 0.5, 5.0},
  };
  constexpr int kPerCase = 200;
  for (const RatioCase& c : cases) {
    BenchSuite suite;
    suite.name = c.label;
    suite.algorithms = {c.algorithm};
    suite.timing = false;
    for (int i = 0; i < kPerCase; ++i) {
      const int n = c.n_lo + i % (c.n_hi - c.n_lo + 1);
      const int m_lo = std::min(c.m_hi, std::max(c.m_lo, static_cast<int>(std::ceil(c.m_per_vertex * n))));
      const int m = m_lo + (i / 4) % (c.m_hi - m_lo + 1);
      suite.instances.push_back(gen(c.problem, n, m, c.p, c.q, 1000 + static_cast<std::uint64_t>(i), c.safe_fraction));
    }
    const BenchReport report = run_bench(suite);
    double worst = 0.0;
    int infeasible = 0;
    for (const RunRecord& r : report.rows) {
      out.require(r.error.empty(), c.label + " " + r.instance + ": " + r.error);
      out.require(r.ratio.has_value(), c.label + " " + r.instance + " no exact baseline");
      if (r.feasible && !*r.feasible) ++infeasible;
      if (!r.ratio) continue;
      worst = std::max(worst, *r.ratio);
      out.require(*r.ratio >= 1.0 - kRatioTol, c.label + " below exact");
      out.require(*r.ratio <= c.ceiling + kRatioTol, c.label + " ceiling");
      if (r.guarantee) out.require(*r.ratio <= *r.guarantee + kRatioTol, c.label + " own guarantee");
    }
    out.require(infeasible == 0, c.label + " infeasible outputs");
    out.detail << c.label << " max=" << fmt(worst) << "/" << fmt(c.ceiling) << " ";
  }
  const double secs = seconds_since(start);
  out.require(secs < kRatioSeconds, "runtime");
  out.detail << "time=" << fmt(secs) << "s";
}

void criterion_uncrossable(Outcome& out) {
  const std::vector<std::pair<int, int>> fgc_cases{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2},
                                                   {3, 3}, {4, 2}, {4, 3}, {4, 4}, {1, 2},
                                                   {1, 3}, {5, 1}};
  int families = 0;
  int rings = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [p, q] = fgc_cases[static_cast<std::size_t>(i) % fgc_cases.size()];
    const int n = 4 + i % 2;
    const Instance inst = gen("fgc", n, std::min(4 * p + 2 * q + 2, 24), p, q, 2000 + static_cast<std::uint64_t>(i), 0.55);
    FlexOptions opt;
    opt.exact_base = (i % 2) == 0;
    opt.hook = [&](const StageEvent& ev) {
      ++families;
      const auto bad = check_uncrossable(*ev.family);
      out.require(!bad, "(" + std::to_string(p) + "," + std::to_string(ev.level) + ") stage " +
                            std::to_string(ev.stage) + " " + (bad ? pair_text(*bad) : ""));
    };
    const FlexResult r = solve_fgc(inst.graph, p, q, opt);
    out.require(is_feasible(inst.graph, inst.problem, r.edges), "fgc infeasible");
  }

  const std::vector<std::pair<int, int>> st_cases{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {1, 4}};
  for (int i = 0; i < 100; ++i) {
    const auto [p, q] = st_cases[static_cast<std::size_t>(i) % st_cases.size()];
    const Instance inst = gen("flex-st", 4 + i % 3, 10 + i % 5, p, q, 3000 + static_cast<std::uint64_t>(i));
    FlexOptions opt;
    opt.hook = [&](const StageEvent& ev) {
      ++rings;
      const auto bad = check_ring_family(*ev.family);
      out.require(!bad, "ring family " + (bad ? pair_text(*bad) : ""));
    };
    const auto& r = std::get<FlexProblem>(inst.problem).pairs.front();
    const FlexResult res = (p == 2 && q == 2 && i % 2 == 1)
                               ? solve_flex_st_22(inst.graph, r.s, r.t, opt)
                               : solve_flex_st(inst.graph, r.s, r.t, p, q, opt);
    out.require(is_feasible(inst.graph, inst.problem, res.edges), "flex-st infeasible");
  }

  // The counterexample kinds must fail with an explicit pair.
  auto counterexample = [](const std::string& kind) {
    GenParams gp;
    gp.kind = kind;
    return generate(gp).graph;
  };
  const FaultGraph f1 = counterexample("figure-1");
  const auto b1 = check_uncrossable(violated_cuts_flex_aug(f1, all_pairs_requirement(4, 3, 2), f1.all_edges()));
  const FaultGraph f3 = counterexample("figure-3");
  const auto b3 = check_uncrossable(counted_family(f3, 2, 6));
  const FaultGraph f4 = counterexample("figure-4");
  const auto b4 = check_uncrossable(counted_family(f4, 3, 8));
  out.require(b1.has_value(), "figure-1 uncrossable");
  out.require(b3.has_value(), "figure-3 uncrossable");
  out.require(b4.has_value(), "figure-4 uncrossable");
  out.require(families > 100 && rings > 0, "too few families checked");
  out.detail << "uncrossable families=" << families << " ring families=" << rings;
  if (b1) out.detail << " fig1 " << pair_text(*b1);
  if (b3) out.detail << " fig3 " << pair_text(*b3);
  if (b4) out.detail << " fig4 " << pair_text(*b4);
}

FlexRequirement random_requirement(Rng& rng, int n, int max_sum) {
  FlexRequirement r;
  r.s = rng.range(0, n - 1);
  r.t = rng.range(0, n - 2);
  if (r.t >= r.s) ++r.t;
  r.p = rng.range(1, max_sum - 1);
  r.q = rng.range(0, max_sum - r.p);
  return r;
}

void criterion_oracles(Outcome& out) {
  Rng rng(4);
  int width = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.range(2, 7);
    const FaultGraph g = testing::random_graph(rng, n, rng.range(n, 11));
    const EdgeSet h = testing::random_subset(rng, g, 0.75);
    std::vector<FlexRequirement> flex{random_requirement(rng, n, 5)};
    if (rng.chance(0.5)) flex.push_back(random_requirement(rng, n, 5));
    const auto expanded = expand_flex_to_bulk(g, flex);
    width = std::max(width, bulk_width(expanded));
    const bool direct = is_flex_feasible(g, flex, h).feasible;
    out.require(direct == is_bulk_feasible(g, expanded, h).feasible, "flex vs bulk expansion");
    out.require(direct == testing::brute_flex(g, flex, h), "flex vs definition");

    std::vector<RelativeRequirement> rel{{flex[0].s, flex[0].t, rng.range(1, 4)}};
    const auto rel_expanded = expand_rsndp_to_bulk(g, rel);
    width = std::max(width, bulk_width(rel_expanded));
    const bool rel_direct = is_rsndp_feasible(g, rel, h).feasible;
    out.require(rel_direct == is_bulk_feasible(g, rel_expanded, h).feasible, "rsndp vs bulk expansion");
    out.require(rel_direct == testing::brute_rsndp(g, rel, h), "rsndp vs definition");
  }
  out.require(width <= 4, "expansion width above 4");

  int rows = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.range(3, 7);
    const FaultGraph g = testing::random_graph(rng, n, rng.range(n, 11));
    std::vector<FlexRequirement> reqs{random_requirement(rng, n, 4)};
    if (rng.chance(0.5)) reqs.push_back(random_requirement(rng, n, 4));
    std::vector<double> x;
    for (int i = 0; i < g.num_edges(); ++i) x.push_back(rng.chance(0.5) ? rng.range(0, 4) / 4.0 : rng.unit());
    const auto [cls, worst] = testing::brute_flex_violation(g, reqs, x);
    for (auto method : {FlexSeparation::kCutSweep, FlexSeparation::kFlow}) {
      const auto row = separate_flex(g, reqs, x, method);
      out.require(row.has_value() == (worst > kSeparationTol), "separation presence");
      if (!row) continue;
      ++rows;
      out.require(row->kind == cls, "separation class");
      out.require(std::abs(row->violation - worst) <= kCostTol, "separation violation");
    }
  }
  out.detail << "500 feasibility samples (max width " << width << "), 200 separation samples (" << rows << " rows)";
}

void criterion_bulk(Outcome& out) {
  double worst = 0.0;
  double worst_greedy = 0.0;
  std::size_t hitting = 0;
  for (int i = 0; i < 100; ++i) {
    GenParams gp;
    gp.kind = "random-multigraph";
    gp.problem = "bulk";
    gp.n = 4 + i % 4;
    gp.m = gp.n + 4 + i % 6;
    gp.scenarios = 3 + i % 3;
    gp.width = 2;
    gp.seed = 5000 + static_cast<std::uint64_t>(i);
    const Instance inst = generate(gp);
    const auto& omega = std::get<BulkProblem>(inst.problem).scenarios;
    BulkOptions opt;
    opt.seed = gp.seed;
    opt.hook = [&](const HittingInstance& h, const GreedyResult& r) {
      if (h.sets.empty()) return;
      ++hitting;
      const double best = exact_hitting_set(h.hitters(), h.element_cost).cost;
      const double bound = 1.0 + std::log(static_cast<double>(std::max<std::size_t>(h.alpha(), 1)));
      out.require(r.cost <= bound * best + kRatioTol, "greedy above (1+ln alpha) exact cover");
      if (best > 0) worst_greedy = std::max(worst_greedy, r.cost / best);
    };
    const BulkResult r = solve_bulk_sndp(inst.graph, omega, opt);
    out.require(is_bulk_feasible(inst.graph, omega, r.edges).feasible, inst.name + " infeasible");
    out.require(testing::brute_bulk(inst.graph, omega, r.edges), inst.name + " fails definition");
    for (const BulkLevel& l : r.levels) {
      bool empty = false;
      try {
        empty = violating_edge_sets_bulk(inst.graph, omega, l.edges, l.level).empty();
      } catch (const Error&) {
        empty = false;
      }
      out.require(empty, inst.name + " level " + std::to_string(l.level) + " left violators");
    }
    const double opt_cost = exact_solve(inst.graph, inst.problem).cost;
    out.require(r.cost >= opt_cost - kCostTol, "below exact");
    if (opt_cost > 0) worst = std::max(worst, r.cost / opt_cost);
  }
  out.detail << "max ratio=" << fmt(worst) << " hitting instances=" << hitting
             << " max greedy/exact cover=" << fmt(worst_greedy);
}

void criterion_certificate(Outcome& out) {
  const std::vector<std::pair<int, int>> cases{{1, 1}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}, {1, 3}};
  int covers = 0;
  double tightest = 0.0;
  for (int i = 0; i < 80; ++i) {
    const auto [p, q] = cases[static_cast<std::size_t>(i) % cases.size()];
    const int n = 4 + i % 2;
    const Instance inst = gen("fgc", n, std::min(4 * p + 2 * q + 2, 22), p, q, 6000 + static_cast<std::uint64_t>(i), 0.55);
    const FaultGraph& g = inst.graph;
    const auto costs = g.costs();
    FlexOptions opt;
    opt.exact_base = (i % 2) == 0;
    opt.hook = [&](const StageEvent& ev) {
      const CutFamily& fam = *ev.family;
      if (fam.empty()) return;
      ++covers;
      const double cost = g.cost(ev.added);
      out.require(cost <= 2.0 * ev.dual_lower_bound + kRatioTol, "cost above twice the dual");
      const double best = g.cost(exact_cover(fam, costs));
      out.require(ev.dual_lower_bound <= best + kRatioTol, "dual above exact cover");
      out.require(fam.covered_by(ev.added), "cover misses a member");
      ev.added.for_each([&](int id) {
        EdgeSet less = ev.added;
        less.erase(id);
        out.require(!fam.covered_by(less), "reverse delete left a redundant edge");
      });
      if (ev.dual_lower_bound > 0) tightest = std::max(tightest, cost / ev.dual_lower_bound);
    };
    solve_fgc(g, p, q, opt);
  }
  out.require(covers > 50, "too few covers");
  out.detail << "covers=" << covers << " max cost/dual=" << fmt(tightest);
}

void criterion_determinism(Outcome& out) {
  struct Case {
    std::string problem;
    std::vector<std::string> algorithms;
    int p, q;
  };
  const std::vector<Case> cases{
      {"fgc", {"fgc", "flex-sndp", "exact"}, 2, 2},
      {"flex-st", {"flex-st", "flex-st-22", "flex-sndp"}, 2, 2},
      {"bulk", {"bulk", "exact"}, 1, 1},
      {"rsndp", {"rsndp"}, 1, 1},
  };
  BenchSuite suite;
  suite.algorithms = algorithm_names();
  suite.seeds = {1, 7};
  suite.timing = false;
  int solutions = 0;
  for (const Case& c : cases) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Instance a = gen(c.problem, 6, 12, c.p, c.q, 7000 + seed);
      const Instance b = gen(c.problem, 6, 12, c.p, c.q, 7000 + seed);
      out.require(serialize_instance(a) == serialize_instance(b), "generator output differs");
      suite.instances.push_back(a);
      for (const std::string& alg : c.algorithms) {
        for (std::uint64_t s : suite.seeds) {
          const AlgorithmRun x = run_algorithm(a, alg, s);
          const AlgorithmRun y = run_algorithm(b, alg, s);
          const std::string sx = serialize_solution({a.name, alg, s, x.cost, x.edges});
          const std::string sy = serialize_solution({b.name, alg, s, y.cost, y.edges});
          out.require(sx == sy, a.name + " " + alg + " solution differs");
          ++solutions;
        }
      }
    }
  }
  suite.threads = 1;
  const std::string first = bench_csv(run_bench(suite));
  suite.threads = static_cast<int>(std::max(2U, std::thread::hardware_concurrency()));
  const std::string second = bench_csv(run_bench(suite));
  out.require(first == second, "CSV differs between runs");
  const auto lines = std::count(first.begin(), first.end(), '\n');
  out.detail << "solution pairs=" << solutions << " CSV lines=" << lines << " identical=" << (first == second);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "integrality gap", criterion_gap},
      {2, "ratio ceilings vs exact", criterion_ratios},
      {3, "uncrossability and ring families", criterion_uncrossable},
      {4, "oracle equivalences", criterion_oracles},
      {5, "bulk pipeline", criterion_bulk},
      {6, "primal-dual certificate", criterion_certificate},
      {7, "determinism", criterion_determinism},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    Outcome out;
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    all = all && out.pass;
    std::printf("%s %d %s: %s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.str().c_str(),
                out.failures.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
