#pragma once

#include <cstdint>
#include <vector>

#include "flexnd/graph.hpp"

namespace flexnd {

// Per-edge flow on an undirected graph. on_edge[id] > 0 means flow runs from
// edge.u to edge.v, < 0 the other way.
struct Flow {
  int source = 0;
  int sink = 0;
  double value = 0.0;
  std::vector<double> on_edge;

  // Amount of flow carried by edge id, direction ignored.
  double magnitude(int id) const;
  EdgeSet support(const FaultGraph& g) const;
  double cost(const FaultGraph& g) const;
};

struct MaxFlowResult {
  double value = 0.0;
  Flow flow;
  // Source side of a minimum cut: vertices reachable from s in the residual graph.
  VertexMask source_side = 0;
};

// Undirected max flow (Dinic). cap[id] is the capacity of edge id; edges with
// capacity 0 are effectively absent. Throws kSourceEqualsSink.
MaxFlowResult max_flow_min_cut(const FaultGraph& g, const std::vector<double>& cap,
                               int s, int t);

// Unit capacity on the edges of f, zero elsewhere.
std::vector<double> unit_capacities(const FaultGraph& g, const EdgeSet& f);

// Integral min-cost flow of exactly `demand` units by successive shortest paths
// with potentials, using edge costs from g. Throws kInfeasibleDemand when the
// max flow is smaller than demand.
Flow min_cost_flow(const FaultGraph& g, const std::vector<std::int64_t>& cap, int s,
                   int t, std::int64_t demand);

// Removes every directed cycle carried by an integral flow. The value is
// unchanged and no edge's flow grows.
Flow cancel_cycles(const FaultGraph& g, const Flow& f);

struct UnitPath {
  std::vector<int> vertices;  // s = vertices.front(), t = vertices.back()
  std::vector<int> edges;
};

// Splits an integral flow into value() unit s-t paths. Cycles are cancelled
// first; the returned paths consume exactly cancel_cycles(f). Paths are
// extracted shortest-first (BFS, ties to the smaller edge id) so the output is
// reproducible. Throws kNonIntegralFlow.
std::vector<UnitPath> flow_decompose(const FaultGraph& g, const Flow& f);

}  // namespace flexnd
