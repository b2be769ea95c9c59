#include "regrep/cayley.hpp"

#include <algorithm>
#include <sstream>

#include "regrep/aut_search.hpp"
#include "regrep/group_aut.hpp"

namespace regrep {

// ---------------------------------------------------------------------------
// ConnectionSet

ConnectionSet::ConnectionSet(const SquarefreeGroup& R)
    : group_(R), member_(R.size(), 0) {}

ConnectionSet ConnectionSet::from_indices(const SquarefreeGroup& R,
                                          std::vector<uint32_t> indices) {
  ConnectionSet s(R);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (uint32_t idx : indices) {
    require(idx < R.size(), ErrorCode::ParseError,
            "connection set element index out of range");
    require(idx != 0, ErrorCode::IdentityInS,
            "connection set must not contain the identity");
    s.member_[idx] = 1;
  }
  s.indices_ = std::move(indices);
  for (uint32_t idx : s.indices_)
    if (!s.member_[R.index_of(R.inv(R.element_at(idx)))]) {
      s.inverse_closed_ = false;
      break;
    }
  return s;
}

ConnectionSet ConnectionSet::from_elements(
    const SquarefreeGroup& R, const std::vector<GroupElement>& elts) {
  std::vector<uint32_t> idx;
  idx.reserve(elts.size());
  for (const GroupElement& e : elts) idx.push_back(R.index_of(e));
  return from_indices(R, std::move(idx));
}

ConnectionSet ConnectionSet::from_mask(const SquarefreeGroup& R,
                                       uint64_t mask) {
  require(R.size() <= 65, ErrorCode::TooLarge,
          "mask form only valid for |R| <= 65");
  std::vector<uint32_t> idx;
  while (mask) {
    idx.push_back(static_cast<uint32_t>(__builtin_ctzll(mask)) + 1);
    mask &= mask - 1;
  }
  return from_indices(R, std::move(idx));
}

uint64_t ConnectionSet::mask() const {
  require(group_.size() <= 65, ErrorCode::TooLarge,
          "mask form only valid for |R| <= 65");
  uint64_t m = 0;
  for (uint32_t idx : indices_) m |= uint64_t(1) << (idx - 1);
  return m;
}

ConnectionSet ConnectionSet::inverted() const {
  std::vector<uint32_t> idx;
  idx.reserve(indices_.size());
  for (uint32_t i : indices_)
    idx.push_back(group_.index_of(group_.inv(group_.element_at(i))));
  return from_indices(group_, std::move(idx));
}

// ---------------------------------------------------------------------------
// CayleyDigraph

CayleyDigraph::CayleyDigraph(const SquarefreeGroup& R, ConnectionSet S)
    : group_(R), set_(std::move(S)) {
  require(R.size() <= kMaxGraphVertices, ErrorCode::TooLarge,
          "Cayley digraph exceeds vertex bound");
  const uint32_t n = R.size();
  out_.resize(n);
  in_.resize(n);
  for (uint32_t v = 0; v < n; ++v) {
    GroupElement gv = R.element_at(v);
    for (uint32_t si : set_.indices()) {
      uint32_t w = R.index_of(R.mul(R.element_at(si), gv));
      out_[v].push_back(w);
      in_[w].push_back(v);
    }
  }
  for (uint32_t v = 0; v < n; ++v) {
    std::sort(out_[v].begin(), out_[v].end());
    std::sort(in_[v].begin(), in_[v].end());
  }
}

bool CayleyDigraph::has_arc(uint32_t from, uint32_t to) const {
  return std::binary_search(out_[from].begin(), out_[from].end(), to);
}

std::string CayleyDigraph::to_dot() const {
  std::ostringstream os;
  const bool graph = set_.inverse_closed();
  os << (graph ? "graph" : "digraph") << " cayley {\n";
  os << "  // " << group_.display_name() << ", |S| = " << set_.size() << "\n";
  for (uint32_t v = 0; v < num_vertices(); ++v) {
    GroupElement e = group_.element_at(v);
    os << "  " << v << " [label=\"(" << e.a << "," << e.b << "," << e.c
       << ")\"];\n";
  }
  for (uint32_t v = 0; v < num_vertices(); ++v)
    for (uint32_t w : out_[v]) {
      if (graph && w < v) continue;  // one edge per pair
      os << "  " << v << (graph ? " -- " : " -> ") << w << ";\n";
    }
  os << "}\n";
  return os.str();
}

CayleyDigraph build_cayley(const SquarefreeGroup& R, const ConnectionSet& S) {
  CayleyDigraph g(R, S);
  // The right-regular generators must be automorphisms; cheap build-time
  // sanity check on the definition.
  for (const GroupElement& gen : {R.z(), R.y(), R.x()}) {
    if (gen == R.identity()) continue;
    Perm p = right_translation(R, gen);
    for (uint32_t v = 0; v < R.size(); ++v)
      for (uint32_t w : g.out_neighbors(v))
        require(g.has_arc(p[v], p[w]), ErrorCode::Internal,
                "regular image is not an automorphism (definition bug)");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

BitGraph to_bitgraph(const CayleyDigraph& g) {
  BitGraph bg;
  bg.reset(g.num_vertices());
  for (uint32_t v = 0; v < g.num_vertices(); ++v)
    for (uint32_t w : g.out_neighbors(v)) bg.add_arc(v, w);
  bg.build_lists();
  return bg;
}

}  // namespace

PermGroup graph_automorphisms(const CayleyDigraph& g) {
  require(g.num_vertices() <= kMaxGraphVertices, ErrorCode::TooLarge,
          "automorphism search exceeds vertex bound");
  BitGraph bg = to_bitgraph(g);
  AutSearch search;
  AutSearch::Result res = search.automorphism_group(bg);
  PermGroup aut(g.num_vertices(), std::move(res.generators));
  // The search's orbit-product order must agree with the stabilizer
  // chain order of the returned generators.
  require(aut.order() == res.order, ErrorCode::Internal,
          "automorphism search order mismatch");
  return aut;
}

bool vertex0_stabilizer_trivial(const CayleyDigraph& g) {
  BitGraph bg = to_bitgraph(g);
  AutSearch search;
  return search.stabilizer_trivial(bg, 0);
}

bool is_drr(const SquarefreeGroup& R, const ConnectionSet& S) {
  CayleyDigraph g(R, S);
  // Aut contains the transitive regular image, so |Aut| = |R| * |Aut_1|.
  return vertex0_stabilizer_trivial(g);
}

bool is_grr(const SquarefreeGroup& R, const ConnectionSet& S) {
  require(S.inverse_closed(), ErrorCode::NotInverseClosed,
          "is_grr requires an inverse-closed connection set");
  return is_drr(R, S);
}

// ---------------------------------------------------------------------------
// Normaliser identity

NormaliserIdentityReport normaliser_identity_check(const SquarefreeGroup& R,
                                                   const ConnectionSet& S) {
  require(R.order() <= 64, ErrorCode::TooLarge,
          "normaliser identity check bounded to |R| <= 64");
  CayleyDigraph g(R, S);
  PermGroup aut = graph_automorphisms(g);
  NormaliserIdentityReport report;
  report.aut_order = aut.order();
  require(!report.aut_order.greater_than_u64(100'000), ErrorCode::TooLarge,
          "Aut(Cay(R,S)) too large for element-sweep normalizer");

  PermGroup rhat = regular_representation(R);
  PermGroup norm = normalizer_in(aut, rhat);
  std::vector<Perm> lhs = norm.elements(100'000);
  std::sort(lhs.begin(), lhs.end());

  AutStabReport stab = set_stabilizer(R, S);
  std::vector<Perm> rhs;
  rhs.reserve(R.size() * stab.stabilizer.size());
  for (const GroupAutomorphism& phi : stab.stabilizer)
    for (uint32_t v = 0; v < R.size(); ++v)
      rhs.push_back(phi.action * right_translation(R, R.element_at(v)));
  std::sort(rhs.begin(), rhs.end());
  rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());

  report.lhs_order = lhs.size();
  report.rhs_order = rhs.size();
  report.equal = lhs == rhs;
  return report;
}

}  // namespace regrep
