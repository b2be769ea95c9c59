#pragma once

#include <optional>

#include "regrep/cayley.hpp"
#include "regrep/connection_set.hpp"
#include "regrep/group.hpp"
#include "regrep/perm.hpp"

namespace regrep {

/// Verified witness that Cay(R,S) is a (generalised) wreath product:
/// subgroups 1 < K normal-in H < R with K(S\H) = S\H = (S\H)K. When
/// S\H is empty the conditions hold vacuously; `degenerate` flags that.
/// K = H is the plain (non-generalised) wreath case; callers that care
/// can compare the subgroups.
struct WreathCertificate {
  Subgroup K;
  Subgroup H;
  bool left_checked = false;   // K(S\H) = S\H verified
  bool right_checked = false;  // (S\H)K = S\H verified (possibly via the
                               // K normal / S inverse-closed equivalence)
  bool degenerate = false;     // S\H empty
};

/// Verifies condition (K(S\H) = S\H = (S\H)K) for the given chain
/// 1 < K normal-in H < R. Uses the one-sided shortcut when K is normal in
/// R or S is inverse-closed; the skipped side is recorded as verified.
/// Throws BadChain if the subgroup chain is invalid; returns nullopt if
/// the chain is fine but the coset conditions fail.
std::optional<WreathCertificate> check_star_star(const SquarefreeGroup& R,
                                                 const ConnectionSet& S,
                                                 const Subgroup& K,
                                                 const Subgroup& H);

/// Scans all admissible pairs (K, H) in a fixed order (|H| ascending,
/// then |K| ascending, then element lists) and returns the first
/// certificate, if any.
std::optional<WreathCertificate> find_gen_wreath(const SquarefreeGroup& R,
                                                 const ConnectionSet& S);

/// The extra automorphism of a generalised wreath product: right
/// multiplication by k in K on the vertices of H, identity elsewhere.
/// Verified to preserve the arcs and to lie outside the regular image
/// before returning.
Perm alpha_k(const CayleyDigraph& g, const WreathCertificate& cert,
             const GroupElement& k);

/// Checks the Aut(R)_S-normalises-H criterion: K characteristic in R,
/// K maximal in H, K(S\H) = S\H, and not K(S\K) = S\K. When the
/// hypotheses hold, the conclusion is verified directly against the
/// computed set stabilizer.
bool char_h_blocks(const SquarefreeGroup& R, const ConnectionSet& S,
                   const Subgroup& K, const Subgroup& H);

/// Recognition via vertex stabilizers: with G <= Aut(Cay(R,S)) and
/// G_1 the stabilizer of the identity vertex, checks H <= N_R(G_1) and
/// the coset inclusions G_1 K, G_1 K^r within G_1 G_1^r for every
/// r in R \ H (only the first family when S is inverse-closed). On
/// success the resulting certificate is re-verified with
/// check_star_star; a failure there would be a bug and aborts.
std::optional<WreathCertificate> gen_wreath_from_stabilizer(
    const SquarefreeGroup& R, const ConnectionSet& S, const PermGroup& G,
    const Subgroup& K, const Subgroup& H);

}  // namespace regrep
