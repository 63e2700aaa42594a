// flexnd command-line front end. JSON summaries go to stdout, bench CSV to a
// file. Exit codes: 0 ok, 1 other error, 2 infeasible, 3 budget exceeded,
// 4 parse error.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "flexnd/bench.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/generate.hpp"
#include "flexnd/instance.hpp"
#include "flexnd/lp.hpp"
#include "json.hpp"

using namespace flexnd;
using Json = nlohmann::ordered_json;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInfeasibleInstance:
    case ErrorKind::kCannotSatisfyFeasibility:
    case ErrorKind::kInfeasibleAugmentation:
    case ErrorKind::kLpInfeasible:
      return 2;
    case ErrorKind::kBudgetExceeded:
    case ErrorKind::kEnumerationTooLarge:
    case ErrorKind::kWidthBudgetExceeded:
      return 3;
    case ErrorKind::kParseError:
      return 4;
    default:
      return 1;
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json edge_list(const EdgeSet& f) { return f.ids(); }

Json witness_json(const Instance& inst, const EdgeSet& h, const Budgets& budgets) {
  Json w = Json::object();
  if (const auto* f = std::get_if<FlexProblem>(&inst.problem)) {
    const FlexCheck c = is_flex_feasible(inst.graph, f->pairs, h);
    if (c.witness) {
      w["requirement"] = c.witness->requirement;
      w["cut"] = c.witness->cut;
      w["removed"] = edge_list(c.witness->removed);
    }
  } else if (const auto* b = std::get_if<BulkProblem>(&inst.problem)) {
    const BulkCheck c = is_bulk_feasible(inst.graph, b->scenarios, h);
    if (c.witness) {
      w["scenario"] = c.witness->scenario;
      w["pair"] = c.witness->pair;
    }
  } else {
    const auto& r = std::get<RelativeProblem>(inst.problem);
    const RelativeCheck c = is_rsndp_feasible(inst.graph, r.pairs, h, budgets);
    if (c.witness) {
      w["requirement"] = c.witness->requirement;
      w["failed"] = edge_list(c.witness->failed);
    }
  }
  return w;
}

struct Args {
  std::string file;
  std::string solution;
  std::string algorithm = "auto";
  std::uint64_t seed = 1;
  std::string out;
  std::string dump_model;
  std::string method = "sweep";
  int k = 2;
  int threads = 0;
  bool no_timing = false;
  bool allow_infeasible = false;
  GenParams gen;
};

std::string auto_algorithm(const Instance& inst) {
  if (const auto* f = std::get_if<FlexProblem>(&inst.problem)) {
    if (f->pairs.size() == 1) {
      const auto& r = f->pairs.front();
      return r.p == 2 && r.q == 2 ? "flex-st-22" : "flex-st";
    }
    return "flex-sndp";
  }
  return std::holds_alternative<BulkProblem>(inst.problem) ? "bulk" : "rsndp";
}

int cmd_solve(const Args& a) {
  const Instance inst = load_instance(a.file);
  const std::string alg = a.algorithm == "auto" ? auto_algorithm(inst) : a.algorithm;
  const Budgets budgets = Budgets::from_env();
  const AlgorithmRun run = run_algorithm(inst, alg, a.seed, budgets);
  const bool ok = is_feasible(inst.graph, inst.problem, run.edges, budgets);
  Solution sol{inst.name, alg, a.seed, run.cost, run.edges};
  if (!a.out.empty()) save_text(a.out, serialize_solution(sol));
  Json j = Json::parse(serialize_solution(sol));
  j["feasible"] = ok;
  if (run.guarantee) j["guarantee"] = *run.guarantee;
  emit(j);
  return ok ? 0 : 2;
}

int cmd_verify(const Args& a) {
  const Instance inst = load_instance(a.file);
  const Solution sol = parse_solution(load_text(a.solution), inst.graph);
  const Budgets budgets = Budgets::from_env();
  const bool ok = is_feasible(inst.graph, inst.problem, sol.edges, budgets);
  Json j = Json::object();
  j["instance"] = inst.name;
  j["feasible"] = ok;
  j["cost"] = sol.cost;
  if (!ok) j["witness"] = witness_json(inst, sol.edges, budgets);
  emit(j);
  return ok ? 0 : 2;
}

int cmd_exact(const Args& a) {
  const Instance inst = load_instance(a.file);
  const ExactResult r = exact_solve(inst.graph, inst.problem);
  Json j = Json::object();
  j["instance"] = inst.name;
  j["cost"] = r.cost;
  j["nodes"] = r.nodes;
  j["edges"] = edge_list(r.edges);
  emit(j);
  return 0;
}

int cmd_lp(const Args& a) {
  const Instance inst = load_instance(a.file);
  CuttingPlaneOptions opts;
  opts.method = a.method == "flow" ? FlexSeparation::kFlow : FlexSeparation::kCutSweep;
  LpRun run;
  if (const auto* f = std::get_if<FlexProblem>(&inst.problem)) {
    run = solve_flex_lp(inst.graph, f->pairs, opts);
  } else if (const auto* b = std::get_if<BulkProblem>(&inst.problem)) {
    run = solve_bulk_lp(inst.graph, b->scenarios, opts);
  } else {
    const auto& r = std::get<RelativeProblem>(inst.problem);
    run = solve_bulk_lp(inst.graph, expand_rsndp_to_bulk(inst.graph, r.pairs, opts.budgets), opts);
  }
  if (!a.dump_model.empty()) save_text(a.dump_model, run.model.dump());
  Json j = Json::object();
  j["instance"] = inst.name;
  j["objective"] = run.solution.objective;
  j["rounds"] = run.rounds;
  j["rows"] = run.model.rows.size();
  j["x"] = run.solution.x;
  emit(j);
  return 0;
}

int cmd_gap(const Args& a) {
  const GapReport r = gap_experiment(a.k);
  Json j = Json::object();
  j["k"] = r.k;
  j["fractional_cost"] = r.fractional_cost;
  j["fractional_clean"] = r.fractional_clean;
  j["lp_optimum"] = r.lp_optimum ? Json(*r.lp_optimum) : Json(nullptr);
  j["exact_opt"] = r.exact_opt ? Json(*r.exact_opt) : Json(nullptr);
  j["min_safe"] = r.min_safe;
  j["candidates_rejected"] = r.candidates_rejected;
  j["bound_certified"] = r.bound_certified;
  j["integral_lower_bound"] = r.integral_lower_bound;
  j["gap_lower_bound"] = r.gap_lower_bound;
  emit(j);
  return 0;
}

int cmd_gen(const Args& a) {
  GenParams gp = a.gen;
  gp.seed = a.seed;
  const std::string text = serialize_instance(generate(gp));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    save_text(a.out, text);
    Json j = Json::object();
    j["written"] = a.out;
    emit(j);
  }
  return 0;
}

int cmd_bench(const Args& a) {
  const std::filesystem::path suite_path(a.file);
  BenchSuite suite = parse_suite(load_text(a.file), suite_path.parent_path().string());
  if (a.threads > 0) suite.threads = a.threads;
  if (a.no_timing) suite.timing = false;
  if (a.allow_infeasible) suite.allow_infeasible = true;
  const BenchReport report = run_bench(suite);
  const std::string out = a.out.empty() ? "bench.csv" : a.out;
  save_text(out, bench_csv(report));
  Json j = Json::object();
  j["suite"] = suite.name;
  j["csv"] = out;
  j["cells"] = report.rows.size();
  Json summary = Json::array();
  for (const RunRecord& r : report.summary) {
    Json s = Json::object();
    s["algorithm"] = r.algorithm;
    s["max_ratio"] = r.ratio ? Json(*r.ratio) : Json(nullptr);
    s["all_feasible"] = r.feasible.value_or(true);
    s["errors"] = r.error;
    summary.push_back(s);
  }
  j["summary"] = summary;
  emit(j);
  return report.any_infeasible() && !suite.allow_infeasible ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexnd: network design under non-uniform edge faults"};
  app.require_subcommand(1);
  Args a;

  auto* solve = app.add_subcommand("solve", "run an algorithm on an instance");
  solve->add_option("file", a.file)->required();
  solve->add_option("--alg", a.algorithm, "auto, fgc, flex-st, flex-st-22, flex-sndp, bulk, rsndp, exact");
  solve->add_option("--seed", a.seed);
  solve->add_option("--out", a.out, "also write the solution document here");

  auto* verify = app.add_subcommand("verify", "check a solution with the feasibility oracle");
  verify->add_option("file", a.file)->required();
  verify->add_option("solution", a.solution)->required();

  auto* exact = app.add_subcommand("exact", "exact minimum-cost solution (small instances)");
  exact->add_option("file", a.file)->required();

  auto* lp = app.add_subcommand("lp", "cutting-plane LP relaxation");
  lp->add_option("file", a.file)->required();
  lp->add_option("--dump-model", a.dump_model, "write the final model as text");
  lp->add_option("--method", a.method, "flex separation: sweep or flow")
      ->check(CLI::IsMember({"sweep", "flow"}));

  auto* gap = app.add_subcommand("gap", "integrality gap experiment on the (1,k) instance");
  gap->add_option("--k", a.k)->required()->check(CLI::Range(1, 30));

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--kind", a.gen.kind)->required();
  gen->add_option("--seed", a.seed);
  gen->add_option("-n", a.gen.n);
  gen->add_option("-m", a.gen.m);
  gen->add_option("--problem", a.gen.problem, "fgc, flex-st, flex-sndp, bulk, rsndp");
  gen->add_option("-p", a.gen.p);
  gen->add_option("-q", a.gen.q);
  gen->add_option("-r", a.gen.r);
  gen->add_option("-k", a.gen.k);
  gen->add_option("--pairs", a.gen.pairs);
  gen->add_option("--scenarios", a.gen.scenarios);
  gen->add_option("--width", a.gen.width);
  gen->add_option("--safe-fraction", a.gen.safe_fraction);
  gen->add_option("--max-cost", a.gen.max_cost);
  gen->add_option("--out", a.out);

  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("suite", a.file)->required();
  bench->add_option("--out", a.out, "CSV path (default bench.csv)");
  bench->add_option("--threads", a.threads);
  bench->add_flag("--no-timing", a.no_timing, "write wall_ms as 0");
  bench->add_flag("--allow-infeasible", a.allow_infeasible);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(a);
    if (*verify) return cmd_verify(a);
    if (*exact) return cmd_exact(a);
    if (*lp) return cmd_lp(a);
    if (*gap) return cmd_gap(a);
    if (*gen) return cmd_gen(a);
    return cmd_bench(a);
  } catch (const Error& e) {
    Json j = Json::object();
    j["error"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
    emit(j);
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  }
}
