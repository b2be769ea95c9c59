#pragma once

#include <cstdint>
#include <string>

#include "regrep/group.hpp"

namespace regrep {

/// Branches of the detection classification for squarefree groups.
enum class Clause {
  c1,          // prime order
  c2a_i,       // C_31 : C_5
  c2a_ii,      // safe/Sophie Germain pair, q = 3 mod 4, q >= 11
  c2b_i,       // abelian, two prime factors
  c2b_ii,      // C_7 : C_3
  c2c,         // remaining nonabelian pq groups
  c3_not_grr,  // >= 3 prime factors, no exception applies
  c3a,         // abelian, >= 3 prime factors
  c3b,         // D_30
  c3c,         // C_q x D_2r, r in {3, 5}
};

const char* clause_code(Clause c);    // "1", "2a-i", ...
const char* clause_reason(Clause c);  // one-line justification

struct DetectionVerdict {
  bool drr_detecting = false;
  bool grr_detecting = false;
  Clause clause = Clause::c1;
};

/// The detection verdict for any squarefree group, decided from the
/// Hoelder parameters alone.
DetectionVerdict classify(const SquarefreeGroup& R);

/// q = 2r + 1 with both prime.
bool is_safe_sophie_pair(uint64_t q, uint64_t r);

/// A squarefree group admits a GRR unless it is abelian of exponent > 2
/// or one of D6, D10; it always admits a DRR.
bool admits_grr(const SquarefreeGroup& R);
bool admits_drr(const SquarefreeGroup& R);

/// For every p | m and q | n, the Hall {p,q}-subgroups of R are
/// nonabelian (equivalently, the order-p part of the action is
/// nontrivial mod every q).
bool all_cross_subgroups_nonabelian(const SquarefreeGroup& R);

/// Centralizer criterion: for R = C_n : C_m with trivial centre, all
/// cross pq-subgroups nonabelian, H characteristic of prime index and m
/// composite, C_{Aut(R)}(H) is trivial. Verifies the hypotheses, then
/// computes the centralizer by brute force; the result is asserted.
bool lemma31_check(const SquarefreeGroup& R, const Subgroup& H);

}  // namespace regrep
