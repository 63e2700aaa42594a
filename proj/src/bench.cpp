#include "flexnd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "flexnd/bulk.hpp"
#include "flexnd/error.hpp"
#include "flexnd/exact.hpp"
#include "flexnd/flex.hpp"
#include "flexnd/generate.hpp"
#include "json.hpp"

namespace flexnd {

namespace {

using Json = nlohmann::ordered_json;

const FlexProblem& flex_of(const Instance& inst, const std::string& alg) {
  const auto* f = std::get_if<FlexProblem>(&inst.problem);
  if (f == nullptr || f->pairs.empty()) {
    throw Error(ErrorKind::kInvalidArgument, alg + " needs a flex problem");
  }
  return *f;
}

const FlexRequirement& single_pair(const Instance& inst, const std::string& alg) {
  const FlexProblem& f = flex_of(inst, alg);
  if (f.pairs.size() != 1) throw Error(ErrorKind::kInvalidArgument, alg + " needs exactly one pair");
  return f.pairs.front();
}

// (p, q) when the pairs are every vertex pair with one common requirement.
std::pair<int, int> all_pairs_pq(const Instance& inst) {
  const FlexProblem& f = flex_of(inst, "fgc");
  const int p = f.pairs.front().p;
  const int q = f.pairs.front().q;
  std::set<std::pair<int, int>> seen;
  for (const auto& r : f.pairs) {
    if (r.p != p || r.q != q) throw Error(ErrorKind::kInvalidArgument, "fgc needs one common (p, q)");
    seen.emplace(std::min(r.s, r.t), std::max(r.s, r.t));
  }
  const int n = inst.graph.num_vertices();
  if (static_cast<int>(seen.size()) != n * (n - 1) / 2) {
    throw Error(ErrorKind::kInvalidArgument, "fgc needs every vertex pair");
  }
  return {p, q};
}

AlgorithmRun from_flex(FlexResult r) { return {std::move(r.edges), r.cost, r.guarantee}; }
AlgorithmRun from_bulk(BulkResult r) { return {std::move(r.edges), r.cost, std::nullopt}; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename T, typename F>
std::string opt(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : std::string();
}

std::string csv_row(const RunRecord& r) {
  std::string line;
  line += csv_field(r.instance) + ",";
  line += csv_field(r.algorithm) + ",";
  line += opt(r.seed, [](std::uint64_t s) { return std::to_string(s); }) + ",";
  line += opt(r.cost, fmt) + ",";
  line += opt(r.exact_opt, fmt) + ",";
  line += opt(r.ratio, fmt) + ",";
  line += opt(r.feasible, [](bool b) { return std::string(b ? "true" : "false"); }) + ",";
  line += opt(r.guarantee, fmt) + ",";
  line += fmt(r.wall_ms) + ",";
  line += csv_field(r.error);
  return line;
}

[[noreturn]] void suite_fail(const std::string& what) {
  throw Error(ErrorKind::kParseError, "suite: " + what);
}

template <typename T>
void read_field(const Json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    suite_fail(std::string("bad value for '") + key + "'");
  }
}

GenParams gen_params(const Json& j) {
  if (!j.is_object()) suite_fail("generate must be an object");
  GenParams gp;
  read_field(j, "kind", gp.kind);
  read_field(j, "n", gp.n);
  read_field(j, "m", gp.m);
  read_field(j, "seed", gp.seed);
  read_field(j, "problem", gp.problem);
  read_field(j, "p", gp.p);
  read_field(j, "q", gp.q);
  read_field(j, "r", gp.r);
  read_field(j, "pairs", gp.pairs);
  read_field(j, "scenarios", gp.scenarios);
  read_field(j, "width", gp.width);
  read_field(j, "k", gp.k);
  read_field(j, "safe_fraction", gp.safe_fraction);
  read_field(j, "max_cost", gp.max_cost);
  read_field(j, "retries", gp.retries);
  return gp;
}

// Run-time spent in `fn`, in milliseconds.
template <typename F>
double timed(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Runs job(i) for i in [0, count) on `threads` workers.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& job) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) job(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"fgc", "flex-st", "flex-st-22", "flex-sndp",
                                              "bulk", "rsndp", "exact"};
  return names;
}

AlgorithmRun run_algorithm(const Instance& inst, const std::string& algorithm,
                           std::uint64_t seed, const Budgets& budgets) {
  const FaultGraph& g = inst.graph;
  FlexOptions fo;
  fo.budgets = budgets;
  BulkOptions bo;
  bo.seed = seed;
  bo.budgets = budgets;
  if (algorithm == "fgc") {
    auto [p, q] = all_pairs_pq(inst);
    return from_flex(solve_fgc(g, p, q, fo));
  }
  if (algorithm == "flex-st") {
    const auto& r = single_pair(inst, algorithm);
    return from_flex(solve_flex_st(g, r.s, r.t, r.p, r.q, fo));
  }
  if (algorithm == "flex-st-22") {
    const auto& r = single_pair(inst, algorithm);
    if (r.p != 2 || r.q != 2) throw Error(ErrorKind::kUnsupportedParameters, "flex-st-22 needs (2,2)");
    return from_flex(solve_flex_st_22(g, r.s, r.t, fo));
  }
  if (algorithm == "flex-sndp") return from_bulk(solve_flex_sndp(g, flex_of(inst, algorithm).pairs, bo));
  if (algorithm == "bulk") {
    const auto* b = std::get_if<BulkProblem>(&inst.problem);
    if (b == nullptr) throw Error(ErrorKind::kInvalidArgument, "bulk needs a bulk problem");
    return from_bulk(solve_bulk_sndp(g, b->scenarios, bo));
  }
  if (algorithm == "rsndp") {
    const auto* r = std::get_if<RelativeProblem>(&inst.problem);
    if (r == nullptr) throw Error(ErrorKind::kInvalidArgument, "rsndp needs an rsndp problem");
    return from_bulk(solve_rsndp(g, r->pairs, bo));
  }
  if (algorithm == "exact") {
    ExactResult r = exact_solve(g, inst.problem, budgets);
    return {std::move(r.edges), r.cost, 1.0};
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown algorithm '" + algorithm + "'");
}

BenchSuite parse_suite(const std::string& text, const std::string& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    suite_fail(e.what());
  }
  if (!doc.is_object()) suite_fail("document must be an object");
  int version = 0;
  read_field(doc, "version", version);
  if (version != kInstanceFormatVersion) suite_fail("unsupported version");
  BenchSuite suite;
  read_field(doc, "name", suite.name);
  read_field(doc, "algorithms", suite.algorithms);
  read_field(doc, "seeds", suite.seeds);
  read_field(doc, "threads", suite.threads);
  read_field(doc, "exact", suite.exact);
  read_field(doc, "timing", suite.timing);
  read_field(doc, "allow_infeasible", suite.allow_infeasible);
  for (const auto& a : suite.algorithms) {
    const auto& names = algorithm_names();
    if (std::find(names.begin(), names.end(), a) == names.end()) suite_fail("unknown algorithm '" + a + "'");
  }
  if (!doc.contains("instances")) return suite;
  for (const Json& entry : doc["instances"]) {
    if (entry.contains("file")) {
      std::string file;
      read_field(entry, "file", file);
      std::filesystem::path path(file);
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      suite.instances.push_back(load_instance(path.string()));
      if (suite.instances.back().name.empty()) suite.instances.back().name = file;
    } else if (entry.contains("generate")) {
      GenParams gp = gen_params(entry["generate"]);
      int count = 1;
      read_field(entry, "count", count);
      for (int i = 0; i < count; ++i) {
        GenParams each = gp;
        each.seed = gp.seed + static_cast<std::uint64_t>(i);
        suite.instances.push_back(generate(each));
      }
    } else {
      suite_fail("instance entry needs 'file' or 'generate'");
    }
  }
  return suite;
}

bool BenchReport::any_infeasible() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const RunRecord& r) { return r.feasible.has_value() && !*r.feasible; });
}

BenchReport run_bench(const BenchSuite& suite) {
  const int threads = suite.threads > 0
                          ? suite.threads
                          : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  const std::size_t ni = suite.instances.size();

  std::vector<std::optional<double>> exact(ni);
  if (suite.exact) {
    parallel_for(ni, threads, [&](std::size_t i) {
      const Instance& inst = suite.instances[i];
      if (inst.graph.num_edges() > suite.budgets.exact_max_edges) return;
      try {
        exact[i] = exact_solve(inst.graph, inst.problem, suite.budgets).cost;
      } catch (const Error&) {
        // no baseline for this instance
      }
    });
  }

  const std::size_t na = suite.algorithms.size();
  const std::size_t ns = suite.seeds.size();
  BenchReport report;
  report.rows.resize(ni * na * ns);
  parallel_for(report.rows.size(), threads, [&](std::size_t cell) {
    const std::size_t i = cell / (na * ns);
    const std::string& alg = suite.algorithms[(cell / ns) % na];
    const std::uint64_t seed = suite.seeds[cell % ns];
    const Instance& inst = suite.instances[i];
    RunRecord& row = report.rows[cell];
    row.instance = inst.name.empty() ? "instance-" + std::to_string(i) : inst.name;
    row.algorithm = alg;
    row.seed = seed;
    row.exact_opt = exact[i];
    try {
      AlgorithmRun run;
      const double ms = timed([&] { run = run_algorithm(inst, alg, seed, suite.budgets); });
      row.wall_ms = suite.timing ? ms : 0.0;
      row.cost = run.cost;
      row.guarantee = run.guarantee;
      row.feasible = is_feasible(inst.graph, inst.problem, run.edges, suite.budgets);
      if (row.exact_opt) {
        row.ratio = *row.exact_opt > 0.0 ? run.cost / *row.exact_opt : 1.0;
      }
      if (!*row.feasible && !suite.allow_infeasible) row.error = "infeasible-output";
    } catch (const Error& e) {
      row.error = e.what();
    } catch (const std::exception& e) {
      row.error = std::string("internal: ") + e.what();
    }
  });

  for (const std::string& alg : suite.algorithms) {
    RunRecord sum;
    sum.instance = "summary";
    sum.algorithm = alg;
    int errors = 0;
    bool any = false;
    bool all_feasible = true;
    for (const RunRecord& r : report.rows) {
      if (r.algorithm != alg) continue;
      any = true;
      sum.wall_ms += r.wall_ms;
      if (!r.error.empty() && r.error != "infeasible-output") ++errors;
      if (r.feasible) all_feasible = all_feasible && *r.feasible;
      if (r.ratio) sum.ratio = std::max(sum.ratio.value_or(0.0), *r.ratio);
    }
    if (!any) continue;
    sum.feasible = all_feasible;
    if (errors > 0) sum.error = "errors=" + std::to_string(errors);
    report.summary.push_back(std::move(sum));
  }
  return report;
}

std::string bench_csv(const BenchReport& report) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  for (const RunRecord& r : report.rows) out += csv_row(r) + "\n";
  for (const RunRecord& r : report.summary) out += csv_row(r) + "\n";
  return out;
}

}  // namespace flexnd
