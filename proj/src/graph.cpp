#include "flexnd/graph.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include "flexnd/error.hpp"

namespace flexnd {

EdgeSet::EdgeSet(std::size_t universe, std::initializer_list<int> ids)
    : EdgeSet(universe) {
  for (int id : ids) insert(id);
}

EdgeSet::EdgeSet(std::size_t universe, std::span<const int> ids)
    : EdgeSet(universe) {
  for (int id : ids) insert(id);
}

EdgeSet EdgeSet::full(std::size_t universe) {
  EdgeSet s(universe);
  for (std::size_t i = 0; i < universe; ++i) s.insert(static_cast<int>(i));
  return s;
}

EdgeSet EdgeSet::from_word(std::size_t universe, std::uint64_t word) {
  assert(universe <= 64);
  EdgeSet s(universe);
  if (!s.words_.empty()) s.words_[0] = word;
  return s;
}

std::size_t EdgeSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool EdgeSet::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::vector<int> EdgeSet::ids() const {
  std::vector<int> out;
  out.reserve(count());
  for_each([&](int id) { out.push_back(id); });
  return out;
}

bool EdgeSet::intersects(const EdgeSet& other) const {
  assert(universe_ == other.universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  assert(universe_ == other.universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

EdgeSet& EdgeSet::operator|=(const EdgeSet& other) {
  assert(universe_ == other.universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

EdgeSet& EdgeSet::operator&=(const EdgeSet& other) {
  assert(universe_ == other.universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

EdgeSet& EdgeSet::operator-=(const EdgeSet& other) {
  assert(universe_ == other.universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::string EdgeSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each([&](int id) {
    if (!first) os << ',';
    os << id;
    first = false;
  });
  os << '}';
  return os.str();
}

FaultGraph::FaultGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 2 || n > kMaxVertices) {
    throw Error(ErrorKind::kInvalidGraph,
                "vertex count must be in [2, 64], got " + std::to_string(n));
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.id != static_cast<int>(i)) {
      throw Error(ErrorKind::kInvalidGraph, "edge ids must be exactly 0..m-1");
    }
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error(ErrorKind::kInvalidGraph,
                  "edge " + std::to_string(e.id) + " has an endpoint out of range");
    }
    if (e.u == e.v) {
      throw Error(ErrorKind::kInvalidGraph,
                  "edge " + std::to_string(e.id) + " is a self-loop");
    }
    if (!(e.cost >= 0.0)) {
      throw Error(ErrorKind::kInvalidGraph,
                  "edge " + std::to_string(e.id) + " has a negative cost");
    }
  }
  edges_ = std::move(edges);
  const std::size_t m = edges_.size();
  incidence_.assign(static_cast<std::size_t>(n), {});
  all_ = EdgeSet(m);
  safe_ = EdgeSet(m);
  unsafe_ = EdgeSet(m);
  for (const Edge& e : edges_) {
    incidence_[static_cast<std::size_t>(e.u)].push_back(e.id);
    incidence_[static_cast<std::size_t>(e.v)].push_back(e.id);
    all_.insert(e.id);
    (e.safe() ? safe_ : unsafe_).insert(e.id);
  }
}

double FaultGraph::cost(const EdgeSet& f) const {
  double total = 0.0;
  f.for_each([&](int id) { total += edges_[static_cast<std::size_t>(id)].cost; });
  return total;
}

std::vector<double> FaultGraph::costs() const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.push_back(e.cost);
  return out;
}

int GraphBuilder::add(int u, int v, double cost, Safety safety) {
  const int id = static_cast<int>(edges_.size());
  edges_.push_back(Edge{id, u, v, cost, safety});
  return id;
}

int GraphBuilder::add_parallel(int u, int v, int copies, double cost, Safety safety) {
  const int first = static_cast<int>(edges_.size());
  for (int i = 0; i < copies; ++i) add(u, v, cost, safety);
  return first;
}

EdgeSet boundary(const FaultGraph& g, const EdgeSet& f, VertexMask s) {
  EdgeSet out(static_cast<std::size_t>(g.num_edges()));
  f.for_each([&](int id) {
    if (g.edge(id).crosses(s)) out.insert(id);
  });
  return out;
}

CutCounts boundary_counts(const FaultGraph& g, const EdgeSet& f, VertexMask s) {
  CutCounts c;
  f.for_each([&](int id) {
    const Edge& e = g.edge(id);
    if (!e.crosses(s)) return;
    if (e.safe()) {
      ++c.safe;
    } else {
      ++c.unsafe;
    }
  });
  return c;
}

UnionFind::UnionFind(int n)
    : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[static_cast<std::size_t>(x)] != x) {
    auto& p = parent_[static_cast<std::size_t>(x)];
    p = parent_[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  auto& ra = rank_[static_cast<std::size_t>(a)];
  auto& rb = rank_[static_cast<std::size_t>(b)];
  if (ra < rb) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  if (ra == rb) ++rank_[static_cast<std::size_t>(a)];
  return true;
}

std::vector<int> connected_components(const FaultGraph& g, const EdgeSet& f) {
  const int n = g.num_vertices();
  UnionFind uf(n);
  f.for_each([&](int id) { uf.unite(g.edge(id).u, g.edge(id).v); });
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (root_label[static_cast<std::size_t>(r)] < 0) {
      root_label[static_cast<std::size_t>(r)] = next++;
    }
    label[static_cast<std::size_t>(v)] = root_label[static_cast<std::size_t>(r)];
  }
  return label;
}

VertexMask component_of(const FaultGraph& g, const EdgeSet& f, int v) {
  const auto label = connected_components(g, f);
  VertexMask out = 0;
  for (int w = 0; w < g.num_vertices(); ++w) {
    if (label[static_cast<std::size_t>(w)] == label[static_cast<std::size_t>(v)]) {
      out |= vertex_bit(w);
    }
  }
  return out;
}

bool connected(const FaultGraph& g, const EdgeSet& f, int u, int v) {
  UnionFind uf(g.num_vertices());
  f.for_each([&](int id) { uf.unite(g.edge(id).u, g.edge(id).v); });
  return uf.find(u) == uf.find(v);
}

bool is_spanning_connected(const FaultGraph& g, const EdgeSet& f) {
  const auto label = connected_components(g, f);
  return std::all_of(label.begin(), label.end(), [](int l) { return l == 0; });
}

}  // namespace flexnd
