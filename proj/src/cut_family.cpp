#include "flexnd/cut_family.hpp"

#include <algorithm>

#include "flexnd/error.hpp"

namespace flexnd {

void for_each_cut(int n, CutDomain domain, int source, int sink,
                  const std::function<void(VertexMask)>& fn) {
  if (n > kMaxEnumerationVertices) {
    throw Error(ErrorKind::kEnumerationTooLarge,
                "cut enumeration is limited to " +
                    std::to_string(kMaxEnumerationVertices) + " vertices");
  }
  const VertexMask full = all_vertices_mask(n);
  if (domain == CutDomain::kAllCuts) {
    for (VertexMask s = 1; s < full; ++s) fn(s);
    return;
  }
  // Enumerate subsets of V \ {source, sink} and add the source.
  const VertexMask free = full & ~vertex_bit(source) & ~vertex_bit(sink);
  VertexMask sub = 0;
  do {
    fn(sub | vertex_bit(source));
    sub = (sub - free) & free;
  } while (sub != 0);
}

CutFamily::CutFamily(const FaultGraph& g, EdgeSet ground, Predicate member,
                     CutDomain domain, int source, int sink)
    : g_(&g),
      ground_(std::move(ground)),
      member_(std::move(member)),
      domain_(domain),
      source_(source),
      sink_(sink) {
  if (domain == CutDomain::kSourceSide &&
      (source < 0 || sink < 0 || source == sink || source >= g.num_vertices() ||
       sink >= g.num_vertices())) {
    throw Error(ErrorKind::kInvalidArgument, "source-side family needs valid s != t");
  }
  for_each_cut(g.num_vertices(), domain, source, sink, [&](VertexMask s) {
    if (member_(s)) members_.push_back(s);
  });
  std::sort(members_.begin(), members_.end());
  boundaries_.reserve(members_.size());
  for (VertexMask s : members_) boundaries_.push_back(boundary(g, g.all_edges(), s));
}

bool CutFamily::in_domain(VertexMask s) const {
  const VertexMask full = g_->vertex_mask();
  if (s == 0 || s == full || (s & ~full) != 0) return false;
  if (domain_ == CutDomain::kSourceSide) {
    return contains_vertex(s, source_) && !contains_vertex(s, sink_);
  }
  return true;
}

bool CutFamily::contains(VertexMask s) const {
  if (!in_domain(s)) return false;
  return std::binary_search(members_.begin(), members_.end(), s);
}

std::vector<VertexMask> CutFamily::canonical_members() const {
  if (domain_ == CutDomain::kSourceSide) return members_;
  const int anchor = g_->num_vertices() - 1;
  std::vector<VertexMask> out;
  for (VertexMask s : members_) {
    const VertexMask c = canonical_cut(s, g_->num_vertices(), anchor);
    // Families need not be closed under complement; keep S when its
    // canonical partner is absent.
    if (c == s || !contains(c)) out.push_back(s);
  }
  return out;
}

std::vector<VertexMask> CutFamily::minimal_violated(const EdgeSet& a) const {
  std::vector<VertexMask> violated;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!boundaries_[i].intersects(a)) violated.push_back(members_[i]);
  }
  std::vector<VertexMask> out;
  for (VertexMask s : violated) {
    const bool has_smaller = std::any_of(violated.begin(), violated.end(), [&](VertexMask t) {
      return t != s && (t & ~s) == 0;
    });
    if (!has_smaller) out.push_back(s);
  }
  return out;
}

bool CutFamily::covered_by(const EdgeSet& a) const { return first_uncovered(a) < 0; }

int CutFamily::first_uncovered(const EdgeSet& a) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (!boundaries_[i].intersects(a)) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace flexnd
