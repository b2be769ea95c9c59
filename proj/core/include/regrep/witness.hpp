#pragma once

#include <optional>
#include <string>

#include "regrep/cayley.hpp"
#include "regrep/connection_set.hpp"
#include "regrep/group.hpp"
#include "regrep/group_aut.hpp"
#include "regrep/wreath.hpp"

namespace regrep {

enum class WitnessKind { digraph, graph };

enum class SearchStrategy {
  exhaustive_orbit_reduced,
  structured_first,
  randomized,
};

enum class SearchStatus { witness_found, none_exists, inconclusive };

const char* to_string(WitnessKind k);
const char* to_string(SearchStatus s);
const char* to_string(SearchStrategy s);

/// Record of the full Aut(R) sweep showing Aut(R)_S = 1.
struct StabilizerProof {
  uint64_t aut_group_order = 0;
  bool trivial = false;
};

/// Machine-checkable evidence that Cay(R,S) is not a DRR/GRR even though
/// Aut(R)_S = 1: the stabilizer sweep, the automorphism count of the
/// digraph, and one explicit automorphism outside the regular image.
struct WitnessCertificate {
  SquarefreeGroup group;
  ConnectionSet set;
  WitnessKind kind = WitnessKind::digraph;
  StabilizerProof stabilizer;
  Count128 cayley_aut_order;
  Perm extra_automorphism;
  std::optional<WreathCertificate> wreath;
};

/// Assembles a certificate for (R, S), verifying everything; throws
/// HypothesisFailed if S is not actually a witness.
WitnessCertificate make_witness_certificate(const SquarefreeGroup& R,
                                            const ConnectionSet& S,
                                            WitnessKind kind);

/// Re-verifies a certificate end to end.
bool verify_witness(const WitnessCertificate& w);

/// Deterministic smallest-first searches (ascending |S|, one candidate
/// per Aut(H)-orbit, ascending mask within a size); memoized per group.
ConnectionSet find_drr_set(const SquarefreeGroup& H);
ConnectionSet find_grr_set(const SquarefreeGroup& H);

/// Witness constructions for nonabelian groups with at least three prime
/// divisors. Case 1 handles groups C_n : C_m all of whose cross
/// pq-subgroups are nonabelian; case 2 handles groups with a cyclic
/// cross subgroup. Both produce inverse-closed sets with a verified
/// wreath certificate and a brute-force stabilizer sweep.
WitnessCertificate construct_case1_witness(const SquarefreeGroup& R);
WitnessCertificate construct_case2_witness(const SquarefreeGroup& R);

struct SweepStats {
  uint64_t subsets_total = 0;  // raw masks (inverse-classes for graphs)
  uint64_t orbit_reps = 0;
  uint64_t trivial_stabilizer_reps = 0;
  uint64_t graph_checks = 0;
  uint64_t burnside_orbit_count = 0;  // independent cross-check, full sweeps
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<WitnessCertificate> witness;
  SweepStats stats;
  std::string strategy_used;
};

/// Witness search. exhaustive_orbit_reduced sweeps one connection set
/// per Aut(R)-orbit in ascending mask order and either returns the first
/// witness or certifies non-existence (that is how "R is detecting" is
/// established). structured_first tries unions of K-cosets over
/// characteristic subgroups K before falling back to the full sweep.
/// randomized samples masks under the budget and may be inconclusive.
SearchOutcome search_witness(const SquarefreeGroup& R, WitnessKind kind,
                             SearchStrategy strategy,
                             uint64_t budget = 1'000'000, uint64_t seed = 1);

/// Degree-55 Cayley graph witness on C_11 : C_5 with full automorphism
/// group of order 660, assembled from the bundled generator file via the
/// coset action on an order-12 subgroup. Only q = 11 is configured.
WitnessCertificate psl2_witness(uint64_t q, const std::string& data_dir = "");

/// Orbit count of connection sets (inverse-closed classes for graphs)
/// under Aut(R), by cycle counting over the automorphism action.
uint64_t burnside_orbit_count(const SquarefreeGroup& R, WitnessKind kind);

}  // namespace regrep
