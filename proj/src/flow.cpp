#include "flexnd/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "flexnd/error.hpp"

namespace flexnd {

namespace {

constexpr double kFlowEps = 1e-9;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool is_integral(double v) { return std::abs(v - std::round(v)) <= 1e-7; }

}  // namespace

double Flow::magnitude(int id) const { return std::abs(on_edge[idx(id)]); }

EdgeSet Flow::support(const FaultGraph& g) const {
  EdgeSet out = g.empty_set();
  for (int id = 0; id < g.num_edges(); ++id) {
    if (magnitude(id) > kFlowEps) out.insert(id);
  }
  return out;
}

double Flow::cost(const FaultGraph& g) const {
  double total = 0.0;
  for (int id = 0; id < g.num_edges(); ++id) total += magnitude(id) * g.edge(id).cost;
  return total;
}

std::vector<double> unit_capacities(const FaultGraph& g, const EdgeSet& f) {
  std::vector<double> cap(idx(g.num_edges()), 0.0);
  f.for_each([&](int id) { cap[idx(id)] = 1.0; });
  return cap;
}

MaxFlowResult max_flow_min_cut(const FaultGraph& g, const std::vector<double>& cap,
                               int s, int t) {
  if (s == t) throw Error(ErrorKind::kSourceEqualsSink, "max flow needs s != t");
  const int n = g.num_vertices();
  const int m = g.num_edges();
  // Arc 2e runs u->v, arc 2e+1 runs v->u; both have capacity cap[e] and the
  // flow is stored antisymmetrically, which models an undirected edge.
  std::vector<double> flow(idx(2 * m), 0.0);
  auto head = [&](int a) { return (a & 1) ? g.edge(a >> 1).u : g.edge(a >> 1).v; };
  auto residual = [&](int a) { return cap[idx(a >> 1)] - flow[idx(a)]; };
  std::vector<std::vector<int>> out(idx(n));
  for (int e = 0; e < m; ++e) {
    if (cap[idx(e)] <= kFlowEps) continue;
    out[idx(g.edge(e).u)].push_back(2 * e);
    out[idx(g.edge(e).v)].push_back(2 * e + 1);
  }

  std::vector<int> level(idx(n));
  std::vector<std::size_t> it(idx(n));
  auto bfs = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[idx(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int a : out[idx(v)]) {
        const int w = head(a);
        if (level[idx(w)] < 0 && residual(a) > kFlowEps) {
          level[idx(w)] = level[idx(v)] + 1;
          q.push(w);
        }
      }
    }
    return level[idx(t)] >= 0;
  };
  auto dfs = [&](auto&& self, int v, double pushed) -> double {
    if (v == t) return pushed;
    for (auto& i = it[idx(v)]; i < out[idx(v)].size(); ++i) {
      const int a = out[idx(v)][i];
      const int w = head(a);
      if (level[idx(w)] != level[idx(v)] + 1 || residual(a) <= kFlowEps) continue;
      const double got = self(self, w, std::min(pushed, residual(a)));
      if (got > kFlowEps) {
        flow[idx(a)] += got;
        flow[idx(a ^ 1)] -= got;
        return got;
      }
    }
    return 0.0;
  };

  double total = 0.0;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    while (true) {
      const double got = dfs(dfs, s, std::numeric_limits<double>::infinity());
      if (got <= kFlowEps) break;
      total += got;
    }
  }

  MaxFlowResult r;
  r.value = total;
  r.flow.source = s;
  r.flow.sink = t;
  r.flow.value = total;
  r.flow.on_edge.assign(idx(m), 0.0);
  for (int e = 0; e < m; ++e) r.flow.on_edge[idx(e)] = flow[idx(2 * e)];
  bfs();
  for (int v = 0; v < n; ++v) {
    if (level[idx(v)] >= 0) r.source_side |= vertex_bit(v);
  }
  return r;
}

Flow min_cost_flow(const FaultGraph& g, const std::vector<std::int64_t>& cap, int s,
                   int t, std::int64_t demand) {
  if (s == t) throw Error(ErrorKind::kSourceEqualsSink, "min cost flow needs s != t");
  const int n = g.num_vertices();
  const int m = g.num_edges();
  struct Arc {
    int to;
    std::int64_t cap;
    double cost;
  };
  // Per undirected edge e: arcs 4e (u->v), 4e+1 its reverse, 4e+2 (v->u),
  // 4e+3 its reverse.
  std::vector<Arc> arcs;
  arcs.reserve(idx(4 * m));
  std::vector<std::vector<int>> out(idx(n));
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    const std::int64_t c = std::max<std::int64_t>(0, cap[idx(e)]);
    const int base = static_cast<int>(arcs.size());
    arcs.push_back({ed.v, c, ed.cost});
    arcs.push_back({ed.u, 0, -ed.cost});
    arcs.push_back({ed.u, c, ed.cost});
    arcs.push_back({ed.v, 0, -ed.cost});
    out[idx(ed.u)].push_back(base);
    out[idx(ed.v)].push_back(base + 1);
    out[idx(ed.v)].push_back(base + 2);
    out[idx(ed.u)].push_back(base + 3);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(idx(n), 0.0);
  std::vector<double> dist(idx(n));
  std::vector<int> parent_arc(idx(n));
  std::vector<char> done(idx(n));
  std::int64_t sent = 0;
  while (sent < demand) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist[idx(s)] = 0.0;
    // Dense Dijkstra; the smallest vertex wins distance ties and the first arc
    // in edge-id order wins relaxation ties.
    for (int round = 0; round < n; ++round) {
      int v = -1;
      for (int w = 0; w < n; ++w) {
        if (!done[idx(w)] && dist[idx(w)] < inf &&
            (v < 0 || dist[idx(w)] < dist[idx(v)] - 1e-12)) {
          v = w;
        }
      }
      if (v < 0) break;
      done[idx(v)] = 1;
      for (int a : out[idx(v)]) {
        const Arc& arc = arcs[idx(a)];
        if (arc.cap <= 0) continue;
        const double reduced =
            std::max(0.0, arc.cost + potential[idx(v)] - potential[idx(arc.to)]);
        const double nd = dist[idx(v)] + reduced;
        if (nd < dist[idx(arc.to)] - 1e-12) {
          dist[idx(arc.to)] = nd;
          parent_arc[idx(arc.to)] = a;
        }
      }
    }
    if (dist[idx(t)] == inf) {
      throw Error(ErrorKind::kInfeasibleDemand,
                  "max flow " + std::to_string(sent) + " is below demand " +
                      std::to_string(demand));
    }
    for (int v = 0; v < n; ++v) {
      if (dist[idx(v)] < inf) potential[idx(v)] += dist[idx(v)];
    }
    std::int64_t push = demand - sent;
    for (int v = t; v != s;) {
      const int a = parent_arc[idx(v)];
      push = std::min(push, arcs[idx(a)].cap);
      v = arcs[idx(a ^ 1)].to;
    }
    for (int v = t; v != s;) {
      const int a = parent_arc[idx(v)];
      arcs[idx(a)].cap -= push;
      arcs[idx(a ^ 1)].cap += push;
      v = arcs[idx(a ^ 1)].to;
    }
    sent += push;
  }

  Flow f;
  f.source = s;
  f.sink = t;
  f.value = static_cast<double>(demand);
  f.on_edge.assign(idx(m), 0.0);
  for (int e = 0; e < m; ++e) {
    // Reverse-arc capacity equals the flow pushed on the forward arc.
    const auto forward = arcs[idx(4 * e + 1)].cap;
    const auto backward = arcs[idx(4 * e + 3)].cap;
    f.on_edge[idx(e)] = static_cast<double>(forward - backward);
  }
  return f;
}

Flow cancel_cycles(const FaultGraph& g, const Flow& f) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  std::vector<std::int64_t> amount(idx(m));
  for (int e = 0; e < m; ++e) {
    if (!is_integral(f.on_edge[idx(e)])) {
      throw Error(ErrorKind::kNonIntegralFlow, "edge " + std::to_string(e));
    }
    amount[idx(e)] = std::llround(f.on_edge[idx(e)]);
  }
  auto tail = [&](int e) { return amount[idx(e)] > 0 ? g.edge(e).u : g.edge(e).v; };
  auto head = [&](int e) { return amount[idx(e)] > 0 ? g.edge(e).v : g.edge(e).u; };

  // Repeatedly find a directed cycle with an iterative DFS and cancel it.
  while (true) {
    std::vector<int> state(idx(n), 0);  // 0 new, 1 on stack, 2 finished
    std::vector<int> via(idx(n), -1);
    std::vector<int> cycle;
    for (int root = 0; root < n && cycle.empty(); ++root) {
      if (state[idx(root)] != 0) continue;
      std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
      state[idx(root)] = 1;
      while (!stack.empty() && cycle.empty()) {
        auto& [v, pos] = stack.back();
        const auto inc = g.incident(v);
        if (pos == inc.size()) {
          state[idx(v)] = 2;
          stack.pop_back();
          continue;
        }
        const int e = inc[pos++];
        if (amount[idx(e)] == 0 || tail(e) != v) continue;
        const int w = head(e);
        if (state[idx(w)] == 1) {
          cycle.push_back(e);
          for (int x = v; x != w; x = tail(via[idx(x)])) cycle.push_back(via[idx(x)]);
        } else if (state[idx(w)] == 0) {
          via[idx(w)] = e;
          state[idx(w)] = 1;
          stack.push_back({w, 0});
        }
      }
    }
    if (cycle.empty()) break;
    std::int64_t low = std::numeric_limits<std::int64_t>::max();
    for (int e : cycle) low = std::min(low, static_cast<std::int64_t>(std::llabs(amount[idx(e)])));
    for (int e : cycle) amount[idx(e)] += amount[idx(e)] > 0 ? -low : low;
  }

  Flow r = f;
  for (int e = 0; e < m; ++e) r.on_edge[idx(e)] = static_cast<double>(amount[idx(e)]);
  return r;
}

std::vector<UnitPath> flow_decompose(const FaultGraph& g, const Flow& f) {
  if (!is_integral(f.value)) throw Error(ErrorKind::kNonIntegralFlow, "flow value");
  const Flow acyclic = cancel_cycles(g, f);
  const int n = g.num_vertices();
  std::vector<std::int64_t> amount(idx(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    amount[idx(e)] = std::llround(acyclic.on_edge[idx(e)]);
  }
  const auto total = std::llround(f.value);
  std::vector<UnitPath> paths;
  for (std::int64_t k = 0; k < total; ++k) {
    std::vector<int> via(idx(n), -1);
    std::vector<char> seen(idx(n), 0);
    std::queue<int> q;
    q.push(f.source);
    seen[idx(f.source)] = 1;
    while (!q.empty() && !seen[idx(f.sink)]) {
      const int v = q.front();
      q.pop();
      for (int e : g.incident(v)) {  // incidence lists are in edge-id order
        const auto a = amount[idx(e)];
        if (a == 0) continue;
        const int from = a > 0 ? g.edge(e).u : g.edge(e).v;
        if (from != v) continue;
        const int w = g.edge(e).other(v);
        if (seen[idx(w)]) continue;
        seen[idx(w)] = 1;
        via[idx(w)] = e;
        q.push(w);
      }
    }
    if (!seen[idx(f.sink)]) {
      throw Error(ErrorKind::kNonIntegralFlow,
                  "flow does not carry its stated value from source to sink");
    }
    UnitPath p;
    for (int v = f.sink; v != f.source;) {
      const int e = via[idx(v)];
      p.edges.push_back(e);
      p.vertices.push_back(v);
      amount[idx(e)] += amount[idx(e)] > 0 ? -1 : 1;
      v = g.edge(e).other(v);
    }
    p.vertices.push_back(f.source);
    std::reverse(p.edges.begin(), p.edges.end());
    std::reverse(p.vertices.begin(), p.vertices.end());
    paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace flexnd
