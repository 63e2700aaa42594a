#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace flexnd {

// A vertex set S packed into a word; bit v is set iff v is in S.
using VertexMask = std::uint64_t;

inline constexpr int kMaxVertices = 64;
// Exhaustive 2^n cut sweeps are only attempted up to this many vertices.
inline constexpr int kMaxEnumerationVertices = 24;
inline constexpr double kCostTolerance = 1e-9;

constexpr bool contains_vertex(VertexMask s, int v) { return (s >> v) & 1U; }
constexpr VertexMask vertex_bit(int v) { return VertexMask{1} << v; }
constexpr VertexMask all_vertices_mask(int n) {
  return n >= 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1;
}
constexpr bool separates(VertexMask s, int u, int v) {
  return contains_vertex(s, u) != contains_vertex(s, v);
}
inline int vertex_count(VertexMask s) { return std::popcount(s); }

// Orientation of a cut relative to an anchor vertex: the side that does not
// contain the anchor. S and V\S share the same canonical form.
constexpr VertexMask canonical_cut(VertexMask s, int n, int anchor) {
  return contains_vertex(s, anchor) ? (all_vertices_mask(n) & ~s) : s;
}

// Two sets properly intersect when they meet and neither contains the other.
constexpr bool properly_intersect(VertexMask a, VertexMask b) {
  return (a & b) != 0 && (a & ~b) != 0 && (b & ~a) != 0;
}

class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}
  EdgeSet(std::size_t universe, std::initializer_list<int> ids);
  EdgeSet(std::size_t universe, std::span<const int> ids);

  static EdgeSet full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }

  bool contains(int id) const {
    return (words_[static_cast<std::size_t>(id) >> 6] >> (id & 63)) & 1U;
  }
  void insert(int id) {
    words_[static_cast<std::size_t>(id) >> 6] |= std::uint64_t{1} << (id & 63);
  }
  void erase(int id) {
    words_[static_cast<std::size_t>(id) >> 6] &= ~(std::uint64_t{1} << (id & 63));
  }

  std::size_t count() const;
  bool empty() const;
  std::vector<int> ids() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        fn(static_cast<int>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  bool intersects(const EdgeSet& other) const;
  bool is_subset_of(const EdgeSet& other) const;

  EdgeSet& operator|=(const EdgeSet& other);
  EdgeSet& operator&=(const EdgeSet& other);
  EdgeSet& operator-=(const EdgeSet& other);

  friend EdgeSet operator|(EdgeSet a, const EdgeSet& b) { return a |= b; }
  friend EdgeSet operator&(EdgeSet a, const EdgeSet& b) { return a &= b; }
  friend EdgeSet operator-(EdgeSet a, const EdgeSet& b) { return a -= b; }
  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
  // Word-wise order; only meant for use as a map key.
  friend bool operator<(const EdgeSet& a, const EdgeSet& b) {
    return a.words_ < b.words_;
  }

  // Low 64 ids as a word. Callers guarantee universe() <= 64.
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }
  static EdgeSet from_word(std::size_t universe, std::uint64_t word);

  std::string to_string() const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class Safety : std::uint8_t { kSafe, kUnsafe };

struct Edge {
  int id = 0;
  int u = 0;
  int v = 0;
  double cost = 0.0;
  Safety safety = Safety::kSafe;

  bool safe() const { return safety == Safety::kSafe; }
  int other(int w) const { return w == u ? v : u; }
  bool crosses(VertexMask s) const { return separates(s, u, v); }
};

// Undirected multigraph whose edges carry a cost and a safe/unsafe label.
// Immutable after construction.
class FaultGraph {
 public:
  FaultGraph() = default;
  // Edge ids must form 0..m-1 (any order); throws Error(kInvalidGraph).
  FaultGraph(int n, std::vector<Edge> edges);

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const int> incident(int v) const {
    return incidence_[static_cast<std::size_t>(v)];
  }

  const EdgeSet& all_edges() const { return all_; }
  const EdgeSet& safe_edges() const { return safe_; }
  const EdgeSet& unsafe_edges() const { return unsafe_; }
  EdgeSet empty_set() const { return EdgeSet(edges_.size()); }

  double cost(const EdgeSet& f) const;
  std::vector<double> costs() const;
  VertexMask vertex_mask() const { return all_vertices_mask(n_); }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incidence_;
  EdgeSet all_;
  EdgeSet safe_;
  EdgeSet unsafe_;
};

// Incremental construction helper: ids are assigned densely in call order.
class GraphBuilder {
 public:
  explicit GraphBuilder(int n) : n_(n) {}
  int add(int u, int v, double cost, Safety safety);
  int add_safe(int u, int v, double cost = 1.0) { return add(u, v, cost, Safety::kSafe); }
  int add_unsafe(int u, int v, double cost = 1.0) { return add(u, v, cost, Safety::kUnsafe); }
  // Adds `copies` parallel edges and returns the id of the first.
  int add_parallel(int u, int v, int copies, double cost, Safety safety);
  FaultGraph build() const { return FaultGraph(n_, edges_); }

 private:
  int n_;
  std::vector<Edge> edges_;
};

struct CutCounts {
  int safe = 0;
  int unsafe = 0;
  int total() const { return safe + unsafe; }
};

// delta_F(S): edges of F with exactly one endpoint in S.
EdgeSet boundary(const FaultGraph& g, const EdgeSet& f, VertexMask s);
CutCounts boundary_counts(const FaultGraph& g, const EdgeSet& f, VertexMask s);

// Component label per vertex for the spanning subgraph (V, F). Labels are
// numbered in order of each component's smallest vertex.
std::vector<int> connected_components(const FaultGraph& g, const EdgeSet& f);
VertexMask component_of(const FaultGraph& g, const EdgeSet& f, int v);
bool connected(const FaultGraph& g, const EdgeSet& f, int u, int v);
bool is_spanning_connected(const FaultGraph& g, const EdgeSet& f);

class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

}  // namespace flexnd
