#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regrep/connection_set.hpp"
#include "regrep/group.hpp"
#include "regrep/perm.hpp"

namespace regrep {

/// Cay(R, S): vertices are the elements of R in index order (vertex 0 is
/// the identity), with an arc r -> s*r for every s in S.
class CayleyDigraph {
 public:
  CayleyDigraph(const SquarefreeGroup& R, ConnectionSet S);

  const SquarefreeGroup& group() const { return group_; }
  const ConnectionSet& connection_set() const { return set_; }
  uint32_t num_vertices() const { return group_.size(); }
  uint32_t out_degree() const { return set_.size(); }

  const std::vector<uint32_t>& out_neighbors(uint32_t v) const {
    return out_[v];
  }
  const std::vector<uint32_t>& in_neighbors(uint32_t v) const {
    return in_[v];
  }
  bool has_arc(uint32_t from, uint32_t to) const;

  std::string to_dot() const;

 private:
  SquarefreeGroup group_;
  ConnectionSet set_;
  std::vector<std::vector<uint32_t>> out_, in_;
};

CayleyDigraph build_cayley(const SquarefreeGroup& R, const ConnectionSet& S);

inline constexpr uint32_t kMaxGraphVertices = 1024;

/// Full automorphism group via equitable refinement + backtracking.
PermGroup graph_automorphisms(const CayleyDigraph& g);

/// True iff no nontrivial automorphism fixes the identity vertex;
/// equivalent to |Aut| = |R| since the regular image is transitive.
bool vertex0_stabilizer_trivial(const CayleyDigraph& g);

bool is_drr(const SquarefreeGroup& R, const ConnectionSet& S);
bool is_grr(const SquarefreeGroup& R, const ConnectionSet& S);

/// Both sides of the normaliser identity, computed independently:
/// N_{Aut(Cay(R,S))}(R-hat) by element sweep, and R-hat * Aut(R)_S by
/// direct product of the two known pieces. Always expected to be equal.
struct NormaliserIdentityReport {
  Count128 aut_order;        // |Aut(Cay(R,S))|
  uint64_t lhs_order = 0;    // |N_A(R-hat)|
  uint64_t rhs_order = 0;    // |R| * |Aut(R)_S|
  bool equal = false;        // element-set equality of both sides
};
NormaliserIdentityReport normaliser_identity_check(const SquarefreeGroup& R,
                                                   const ConnectionSet& S);

}  // namespace regrep
