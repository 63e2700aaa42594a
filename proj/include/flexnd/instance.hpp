#pragma once

#include <string>
#include <string_view>

#include "flexnd/problem.hpp"

namespace flexnd {

inline constexpr int kInstanceFormatVersion = 1;

struct Instance {
  std::string name;
  FaultGraph graph;
  Problem problem;
};

// JSON document:
//   {"version": 1, "name": ..., "vertices": n,
//    "edges": [[u, v, cost, "safe"|"unsafe"], ...],   (edge id = position)
//    "problem": {"kind": "flex",  "pairs": [[s, t, p, q], ...]}
//             | {"kind": "bulk",  "scenarios": [{"fail": [ids], "pairs": [[u, v], ...]}]}
//             | {"kind": "rsndp", "pairs": [[s, t, r], ...]}}
// Keys are written in this order, so serialize(parse(text)) reproduces any
// text this function wrote. Throws kParseError.
std::string serialize_instance(const Instance& inst);
Instance parse_instance(std::string_view text);

Instance load_instance(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

// {"version": 1, "instance": name, "algorithm": ..., "seed": ..., "cost": ..., "edges": [ids]}
struct Solution {
  std::string instance;
  std::string algorithm;
  std::uint64_t seed = 0;
  double cost = 0.0;
  EdgeSet edges;
};
std::string serialize_solution(const Solution& sol);
Solution parse_solution(std::string_view text, const FaultGraph& g);

bool operator==(const Instance& a, const Instance& b);

}  // namespace flexnd
