#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regrep/errors.hpp"

namespace regrep {

// Canonical word z^a y^b x^c of a group in Hoelder form
// C_t x (C_n : C_m), stored as the residue triple (a, b, c).
struct GroupElement {
  uint32_t a = 0;
  uint32_t b = 0;
  uint32_t c = 0;

  auto operator<=>(const GroupElement&) const = default;
};

// A group of squarefree order t*n*m with presentation
//   z^t = y^n = x^m = 1,  [z,y] = [z,x] = 1,  x y x^-1 = y^j,
// where j has multiplicative order m mod n and gcd(j-1, n) = 1 (so the
// semidirect factor C_n : C_m has trivial centre). Every group of
// squarefree order has exactly one such normal form with
//   j = min{ j^u mod n : gcd(u, m) = 1 },
// which is what make() stores. Immutable and cheap to copy.
class SquarefreeGroup {
 public:
  static SquarefreeGroup make(uint64_t t, uint64_t n, uint64_t m, uint64_t j);

  uint64_t t() const { return impl_->t; }
  uint64_t n() const { return impl_->n; }
  uint64_t m() const { return impl_->m; }
  uint64_t j() const { return impl_->j; }
  uint64_t order() const { return impl_->order; }
  uint32_t size() const { return static_cast<uint32_t>(impl_->order); }

  bool is_abelian() const { return impl_->n == 1; }

  GroupElement identity() const { return {0, 0, 0}; }
  GroupElement z() const;  // order t (identity if t = 1)
  GroupElement y() const;  // order n
  GroupElement x() const;  // order m

  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& g) const;
  GroupElement conj(const GroupElement& g, const GroupElement& by) const;
  GroupElement pow(GroupElement g, int64_t e) const;
  uint64_t element_order(const GroupElement& g) const {
    return impl_->elt_order[index_of(g)];
  }

  // Vertex/element numbering: lexicographic on (a, b, c); identity is 0.
  uint32_t index_of(const GroupElement& g) const {
    return (g.a * impl_->n + g.b) * impl_->m + g.c;
  }
  GroupElement element_at(uint32_t idx) const {
    const uint32_t c = idx % impl_->m;
    idx /= impl_->m;
    return {idx / impl_->n, idx % impl_->n, c};
  }

  bool commutes(const GroupElement& g, const GroupElement& h) const;

  std::string literal() const;       // "sqfree:t=..,n=..,m=..,j=.."
  std::string display_name() const;  // "D6", "C21", "F21", "C5xD6", ...

  bool operator==(const SquarefreeGroup& o) const {
    return impl_->t == o.impl_->t && impl_->n == o.impl_->n &&
           impl_->m == o.impl_->m && impl_->j == o.impl_->j;
  }

 private:
  struct Impl {
    uint32_t t, n, m, j;
    uint64_t order;
    std::vector<uint32_t> jpow;       // j^c mod n for c in [0, m)
    std::vector<uint32_t> elt_order;  // order of every element, by index
  };
  std::shared_ptr<const Impl> impl_;
};

// Max |R| for exhaustive subgroup / centre / automorphism machinery.
inline constexpr uint64_t kEngineBound = 512;

struct Subgroup {
  std::vector<GroupElement> generators;
  std::vector<uint32_t> elements;  // sorted element indices, always cached
  bool is_normal = false;
  bool is_characteristic = false;

  uint64_t order() const { return elements.size(); }
  bool contains(uint32_t elt_index) const;
  bool is_trivial() const { return elements.size() == 1; }
};

SquarefreeGroup make_group(uint64_t t, uint64_t n, uint64_t m, uint64_t j);

// One canonical representative per isomorphism class.
std::vector<SquarefreeGroup> enumerate_groups(uint64_t order);
std::vector<uint64_t> squarefree_orders_up_to(uint64_t bound);
bool is_squarefree(uint64_t v);
bool is_prime(uint64_t v);
std::vector<uint64_t> prime_factors(uint64_t v);

Subgroup subgroup_closure(const SquarefreeGroup& R,
                          const std::vector<GroupElement>& gens);

// All subgroups, via closure of every <=2-element generating set
// (squarefree groups and all their subgroups are 2-generated). Sorted by
// (order, element list); normal/characteristic flags filled in.
const std::vector<Subgroup>& subgroups(const SquarefreeGroup& R);

// Hall subgroup whose order is the product of the given primes
// (restricted to those dividing |R|); always exists.
Subgroup hall_subgroup(const SquarefreeGroup& R,
                       const std::vector<uint64_t>& primes);

Subgroup centre(const SquarefreeGroup& R);
Subgroup centralizer(const SquarefreeGroup& R, const GroupElement& g);
bool is_normal_subgroup(const SquarefreeGroup& R, const Subgroup& K);

struct QuotientResult {
  SquarefreeGroup group;           // canonical Hoelder form of R/K
  std::vector<uint32_t> projection;  // element index in R -> index in R/K
};
QuotientResult quotient(const SquarefreeGroup& R, const Subgroup& K);

// Group literal / alias parsing ("sqfree:t=5,n=7,m=3,j=2", "D6", "C21",
// "F21", generic "C<k>"/"D<2r>").
SquarefreeGroup parse_group(const std::string& text);

}  // namespace regrep
