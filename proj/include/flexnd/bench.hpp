#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexnd/instance.hpp"

namespace flexnd {

// Algorithm names: fgc, flex-st, flex-st-22, flex-sndp, bulk, rsndp, exact.
// fgc needs an all-pairs flex problem with one (p, q); the flex-st variants a
// single flex pair. Seeds only matter for bulk, flex-sndp and rsndp.
struct AlgorithmRun {
  EdgeSet edges;
  double cost = 0.0;
  std::optional<double> guarantee;  // provable ratio, when the algorithm has one
};

AlgorithmRun run_algorithm(const Instance& inst, const std::string& algorithm,
                           std::uint64_t seed, const Budgets& budgets = Budgets::from_env());

const std::vector<std::string>& algorithm_names();

struct RunRecord {
  std::string instance;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<double> cost;
  std::optional<double> exact_opt;
  std::optional<double> ratio;
  std::optional<bool> feasible;
  std::optional<double> guarantee;
  double wall_ms = 0.0;
  std::string error;
};

struct BenchSuite {
  std::string name;
  std::vector<Instance> instances;
  std::vector<std::string> algorithms;
  std::vector<std::uint64_t> seeds{1};
  int threads = 0;            // 0: hardware concurrency
  bool exact = true;          // attach exact_opt when within budget
  bool timing = true;         // false writes wall_ms as 0 for byte-stable output
  bool allow_infeasible = false;
  Budgets budgets = Budgets::from_env();
};

// Suite document:
//   {"version": 1, "name": ..., "algorithms": [...], "seeds": [...],
//    "threads": 0, "exact": true, "timing": true, "allow_infeasible": false,
//    "instances": [{"file": path} | {"generate": {GenParams fields}, "count": c}]}
// "count" draws c instances with seeds seed, seed+1, ... Relative paths are
// resolved against base_dir. Throws kParseError.
BenchSuite parse_suite(const std::string& text, const std::string& base_dir = ".");

struct BenchReport {
  std::vector<RunRecord> rows;     // instances x algorithms x seeds, suite order
  std::vector<RunRecord> summary;  // one per algorithm, in suite order
  // A solution failed its oracle check (errors are not counted).
  bool any_infeasible() const;
};

// Cells run on a worker pool; rows come back in suite order regardless.
// Per-cell errors land in the error column. Without allow_infeasible an
// infeasible solution is still reported, with error "infeasible-output".
BenchReport run_bench(const BenchSuite& suite);

// Header: instance,algorithm,seed,cost,exact_opt,ratio,feasible,guarantee,wall_ms,error
// Floats with 9 significant digits, absent values empty, summary rows after
// the cells with instance "summary" and the largest ratio seen.
std::string bench_csv(const BenchReport& report);
inline constexpr const char* kBenchCsvHeader =
    "instance,algorithm,seed,cost,exact_opt,ratio,feasible,guarantee,wall_ms,error";

}  // namespace flexnd
