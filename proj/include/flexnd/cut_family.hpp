#pragma once

#include <functional>
#include <vector>

#include "flexnd/graph.hpp"

namespace flexnd {

// Which vertex sets a family ranges over.
//  kAllCuts: every S with {} != S != V (families closed under complement keep
//            both orientations, which the primal-dual engine needs).
//  kSourceSide: S contains `source` and misses `sink`.
enum class CutDomain { kAllCuts, kSourceSide };

// A family of vertex cuts given by a membership predicate. Members are
// enumerated once at construction (graphs here are small), so the family is a
// snapshot: it must not outlive the graph it was built on.
class CutFamily {
 public:
  using Predicate = std::function<bool(VertexMask)>;

  CutFamily(const FaultGraph& g, EdgeSet ground, Predicate member,
            CutDomain domain = CutDomain::kAllCuts, int source = -1, int sink = -1);

  const FaultGraph& graph() const { return *g_; }
  const EdgeSet& ground() const { return ground_; }
  CutDomain domain() const { return domain_; }
  int source() const { return source_; }
  int sink() const { return sink_; }

  bool in_domain(VertexMask s) const;
  // Domain test plus predicate; answers for arbitrary masks, including
  // {} and V (never members).
  bool contains(VertexMask s) const;

  // All members in increasing mask order.
  const std::vector<VertexMask>& members() const { return members_; }
  // One representative per {S, V\S} pair: the side without vertex n-1, or
  // the source side for kSourceSide families.
  std::vector<VertexMask> canonical_members() const;
  bool empty() const { return members_.empty(); }

  // delta_E(S) for the i-th member.
  const EdgeSet& member_boundary(std::size_t i) const { return boundaries_[i]; }

  // Inclusion-minimal members S with delta_A(S) empty, in increasing mask order.
  std::vector<VertexMask> minimal_violated(const EdgeSet& a) const;
  // True iff every member has an edge of `a` on its boundary.
  bool covered_by(const EdgeSet& a) const;
  // Index of some member not covered by `a`, or -1.
  int first_uncovered(const EdgeSet& a) const;

 private:
  const FaultGraph* g_;
  EdgeSet ground_;
  Predicate member_;
  CutDomain domain_;
  int source_;
  int sink_;
  std::vector<VertexMask> members_;
  std::vector<EdgeSet> boundaries_;
};

// Calls fn(S) for every S in the domain, in increasing mask order. The number
// of vertices must be at most kMaxEnumerationVertices.
void for_each_cut(int n, CutDomain domain, int source, int sink,
                  const std::function<void(VertexMask)>& fn);

}  // namespace flexnd
