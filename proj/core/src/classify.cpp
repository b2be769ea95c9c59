#include "regrep/classify.hpp"

#include "regrep/group_aut.hpp"

namespace regrep {

const char* clause_code(Clause c) {
  switch (c) {
    case Clause::c1:
      return "1";
    case Clause::c2a_i:
      return "2a-i";
    case Clause::c2a_ii:
      return "2a-ii";
    case Clause::c2b_i:
      return "2b-i";
    case Clause::c2b_ii:
      return "2b-ii";
    case Clause::c2c:
      return "2c";
    case Clause::c3_not_grr:
      return "3-not-GRR";
    case Clause::c3a:
      return "3a";
    case Clause::c3b:
      return "3b";
    case Clause::c3c:
      return "3c";
  }
  return "?";
}

const char* clause_reason(Clause c) {
  switch (c) {
    case Clause::c1:
      return "prime (or trivial) order: the point stabilizer dichotomy "
             "forces every trivial-stabilizer set to give a DRR";
    case Clause::c2a_i:
      return "(q,r) = (31,5): graph witnesses with automorphism group "
             "PGammaL(5,2) exist";
    case Clause::c2a_ii:
      return "safe/Sophie Germain pair with q = 3 (mod 4), q >= 11: graph "
             "witnesses with automorphism group PSL(2,q) exist";
    case Clause::c2b_i:
      return "abelian of composite order: inversion fixes every "
             "inverse-closed set; digraph witnesses exist";
    case Clause::c2b_ii:
      return "C7:C3: digraph witnesses exist but no graph witness does "
             "(exhaustive check)";
    case Clause::c2c:
      return "remaining nonabelian pq groups admit no witness";
    case Clause::c3_not_grr:
      return "three or more prime factors, no exception applies: "
             "wreath-product graph witnesses exist";
    case Clause::c3a:
      return "abelian with three or more prime factors: inversion blocks "
             "graph witnesses; digraph witnesses exist";
    case Clause::c3b:
      return "D30: no graph witness (exhaustive check); digraph witnesses "
             "exist";
    case Clause::c3c:
      return "C_q x D_2r with r in {3,5}: every wreath-structured graph "
             "witness is blocked by a constructed automorphism";
  }
  return "?";
}

bool is_safe_sophie_pair(uint64_t q, uint64_t r) {
  require(is_prime(q), ErrorCode::NotPrime, "q must be prime");
  require(is_prime(r), ErrorCode::NotPrime, "r must be prime");
  return q == 2 * r + 1;
}

bool admits_grr(const SquarefreeGroup& R) {
  if (R.is_abelian()) return R.order() <= 2;  // exponent > 2 otherwise
  if (R.t() == 1 && R.m() == 2 && (R.n() == 3 || R.n() == 5))
    return false;  // D6, D10
  return true;
}

bool admits_drr(const SquarefreeGroup&) { return true; }

bool all_cross_subgroups_nonabelian(const SquarefreeGroup& R) {
  for (uint64_t p : prime_factors(R.m()))
    for (uint64_t q : prime_factors(R.n())) {
      uint64_t jp = 1;
      for (uint64_t i = 0; i < R.m() / p; ++i) jp = jp * R.j() % q;
      if (jp == 1 % q) return false;
    }
  return true;
}

DetectionVerdict classify(const SquarefreeGroup& R) {
  const auto primes = prime_factors(R.order());
  const size_t omega = primes.size();

  if (omega <= 1) return {true, true, Clause::c1};

  if (omega == 2) {
    if (R.is_abelian()) return {false, true, Clause::c2b_i};
    // Nonabelian with two prime factors: R = C_q : C_r in normal form.
    const uint64_t q = R.n(), r = R.m();
    if (q == 31 && r == 5) return {false, false, Clause::c2a_i};
    if (is_safe_sophie_pair(q, r) && q % 4 == 3 && q >= 11)
      return {false, false, Clause::c2a_ii};
    if (q == 7 && r == 3) return {false, true, Clause::c2b_ii};
    // Complement double-check of the clause conditions.
    require(R.t() == 1 && is_prime(q) && is_prime(r), ErrorCode::Internal,
            "nonabelian pq group not in normal form");
    return {true, true, Clause::c2c};
  }

  // Three or more prime factors: never DRR-detecting.
  if (R.is_abelian()) return {false, true, Clause::c3a};
  if (R.t() == 1 && R.n() == 15 && R.m() == 2 && R.j() == 14)
    return {false, true, Clause::c3b};
  if (is_prime(R.t()) && R.m() == 2 && (R.n() == 3 || R.n() == 5) &&
      R.j() == R.n() - 1)
    return {false, true, Clause::c3c};
  return {false, false, Clause::c3_not_grr};
}

bool lemma31_check(const SquarefreeGroup& R, const Subgroup& H) {
  require(R.t() == 1 && !R.is_abelian(), ErrorCode::HypothesisFailed,
          "requires R = C_n : C_m with trivial centre");
  require(all_cross_subgroups_nonabelian(R), ErrorCode::HypothesisFailed,
          "requires every cross pq-subgroup nonabelian");
  require(!is_prime(R.m()), ErrorCode::HypothesisFailed,
          "requires m composite");
  require(H.order() > 0 && R.order() % H.order() == 0 &&
              is_prime(R.order() / H.order()),
          ErrorCode::HypothesisFailed, "requires H of prime index");
  require(is_characteristic(R, H), ErrorCode::HypothesisFailed,
          "requires H characteristic in R");

  bool trivial = true;
  for (const GroupAutomorphism& phi : automorphism_group(R)) {
    if (phi.is_identity()) continue;
    bool fixes_pointwise = true;
    for (uint32_t e : H.elements)
      if (phi.action[e] != e) {
        fixes_pointwise = false;
        break;
      }
    if (fixes_pointwise) {
      trivial = false;
      break;
    }
  }
  require(trivial, ErrorCode::Internal,
          "centralizer of H in Aut(R) is nontrivial despite the hypotheses");
  return trivial;
}

}  // namespace regrep
