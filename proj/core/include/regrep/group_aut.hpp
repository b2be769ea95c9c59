#pragma once

#include <cstdint>
#include <vector>

#include "regrep/connection_set.hpp"
#include "regrep/group.hpp"
#include "regrep/perm.hpp"
#include "regrep/wreath.hpp"

namespace regrep {

/// An automorphism of R, stored as the images of the canonical
/// generators (z, y, x) together with the induced permutation of R's
/// elements.
struct GroupAutomorphism {
  GroupElement z_image, y_image, x_image;
  Perm action;  // on element indices

  GroupElement apply(const SquarefreeGroup& R, const GroupElement& g) const {
    return R.element_at(action[R.index_of(g)]);
  }
  bool is_identity() const { return action.is_identity(); }
};

/// Builds the automorphism defined by the given generator images,
/// checking the defining relations and bijectivity. Throws BadAction if
/// the images do not define an automorphism.
GroupAutomorphism make_automorphism(const SquarefreeGroup& R,
                                    const GroupElement& z_image,
                                    const GroupElement& y_image,
                                    const GroupElement& x_image);

GroupAutomorphism inner_automorphism(const SquarefreeGroup& R,
                                     const GroupElement& k);

GroupAutomorphism compose(const SquarefreeGroup& R,
                          const GroupAutomorphism& first,
                          const GroupAutomorphism& second);

GroupAutomorphism invert(const SquarefreeGroup& R,
                         const GroupAutomorphism& phi);

/// Complete Aut(R) by brute force over order-compatible generator
/// images; memoized per group. Bounded to |R| <= 512.
const std::vector<GroupAutomorphism>& automorphism_group(
    const SquarefreeGroup& R);

struct AutStabReport {
  uint64_t aut_order = 0;                    // |Aut(R)|
  std::vector<GroupAutomorphism> stabilizer;  // Aut(R)_S, identity included
  bool trivial = false;
};

/// Exact set stabilizer Aut(R)_S = { phi : phi(S) = S }.
AutStabReport set_stabilizer(const SquarefreeGroup& R,
                             const ConnectionSet& S);

bool is_characteristic(const SquarefreeGroup& R, const Subgroup& K);

/// For D in {D6, D10} and inverse-closed S: a nontrivial automorphism
/// fixing S setwise and inverting the rotation subgroup, realized as
/// conjugation by a reflection chosen from S's trace on the reflections.
GroupAutomorphism dihedral_beta(const SquarefreeGroup& D,
                                const ConnectionSet& S);

/// Conjugation by an element of (Z(H) n K) \ Z(R): nontrivial and fixes
/// S setwise whenever (K, H) is a wreath certificate for (R, S).
GroupAutomorphism conjugation_witness(const SquarefreeGroup& R,
                                      const WreathCertificate& cert,
                                      const ConnectionSet& S);

/// For R = C_q x D_2r (r in {3, 5}, q odd prime != r), inverse-closed S
/// and a wreath certificate with |K| prime: a verified nontrivial
/// element of Aut(R)_S. Normalizes (K, H) up to conjugacy with H
/// enlarged to a maximal admissible subgroup, then dispatches on the
/// five possible shapes.
GroupAutomorphism qdr_wreath_witness(const SquarefreeGroup& R,
                                     const WreathCertificate& cert,
                                     const ConnectionSet& S);

}  // namespace regrep
