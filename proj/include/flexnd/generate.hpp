#pragma once

#include <cstdint>
#include <string>

#include "flexnd/instance.hpp"

namespace flexnd {

// Kinds: random-geometric, random-multigraph, appendix-a, figure-1, figure-3,
// figure-4. The last four are fixed instances (the (1,k) integrality-gap
// family and three four-vertex counterexamples) and ignore n, m and the
// problem fields.
struct GenParams {
  std::string kind = "random-multigraph";
  int n = 6;
  int m = 12;
  std::uint64_t seed = 1;

  // Problem for the random kinds: fgc (all pairs), flex-st (0 to n-1),
  // flex-sndp (random pairs), bulk, rsndp.
  std::string problem = "fgc";
  int p = 2;
  int q = 2;
  int r = 2;           // rsndp requirement
  int pairs = 2;       // flex-sndp / rsndp pairs, bulk pairs per scenario
  int scenarios = 3;   // bulk
  int width = 2;       // bulk: largest failure set
  int k = 2;           // appendix-a

  double safe_fraction = 0.5;
  int max_cost = 10;   // integral costs in [1, max_cost]
  int retries = 500;
};

// Pure function of the parameters. Random kinds redraw (with derived seeds)
// until G itself is feasible for the drawn problem; throws
// kCannotSatisfyFeasibility when `retries` draws all fail, kInvalidArgument on
// unknown kinds or insane sizes.
Instance generate(const GenParams& params);

}  // namespace flexnd
