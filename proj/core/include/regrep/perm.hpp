#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "regrep/count128.hpp"
#include "regrep/errors.hpp"
#include "regrep/group.hpp"

namespace regrep {

/// A permutation of {0, ..., degree-1} stored as its image array.
/// Composition is left-to-right: (a * b)[v] = b[a[v]].
class Perm {
 public:
  Perm() = default;
  explicit Perm(uint32_t degree);  // identity
  static Perm from_images(std::vector<uint32_t> images);

  uint32_t degree() const { return static_cast<uint32_t>(img_.size()); }
  uint32_t operator[](uint32_t v) const { return img_[v]; }
  const std::vector<uint32_t>& images() const { return img_; }

  Perm operator*(const Perm& rhs) const;
  Perm inverse() const;
  Perm conjugated_by(const Perm& g) const;  // g^-1 * (*this) * g
  bool is_identity() const;
  uint64_t order() const;

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

  // Cycle notation, e.g. "(0 1 2)(3 4)"; fixed points omitted, identity
  // prints as "()".
  std::string to_cycles() const;
  static Perm parse_cycles(const std::string& text, uint32_t degree);

 private:
  std::vector<uint32_t> img_;
};

/// Permutation group given by generators, with a deterministic
/// Schreier-Sims stabilizer chain built on demand by freeze(). Frozen
/// groups are immutable and safe to share across threads.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(uint32_t degree, std::vector<Perm> generators);

  uint32_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  /// Builds the stabilizer chain (no-op when already built).
  void freeze() const;
  bool frozen() const { return chain_ != nullptr; }

  Count128 order() const;
  bool contains(const Perm& p) const;
  bool is_subgroup_of(const PermGroup& other) const;
  bool trivial() const;

  std::vector<std::vector<uint32_t>> orbits() const;
  std::vector<uint32_t> orbit_of(uint32_t point) const;
  bool transitive() const;

  PermGroup point_stabilizer(uint32_t point) const;

  /// Streams every group element exactly once, in a deterministic order.
  /// Returns false if the visitor aborted the enumeration.
  bool for_each_element(const std::function<bool(const Perm&)>& fn) const;
  std::vector<Perm> elements(uint64_t limit) const;

  std::vector<uint32_t> base() const;

 private:
  struct Chain;
  uint32_t degree_ = 0;
  std::vector<Perm> gens_;
  mutable std::shared_ptr<const Chain> chain_;

  static std::shared_ptr<const Chain> build_chain(
      uint32_t degree, const std::vector<Perm>& gens,
      const std::vector<uint32_t>& base_hint);
  friend PermGroup with_base_hint(const PermGroup&,
                                  const std::vector<uint32_t>&);
};

/// Same group, chain rebuilt with the given initial base points.
PermGroup with_base_hint(const PermGroup& G, const std::vector<uint32_t>& hint);

/// Right-regular representation of R on its |R| elements (vertex v maps
/// to index(element(v) * g)).
PermGroup regular_representation(const SquarefreeGroup& R);
Perm right_translation(const SquarefreeGroup& R, const GroupElement& g);
/// True iff p is right translation by some element of R.
bool in_regular_image(const SquarefreeGroup& R, const Perm& p);

/// Exact normalizer N_A(H). Element sweep while |A| <= sweep_bound,
/// base-image backtracking beyond that.
PermGroup normalizer_in(const PermGroup& A, const PermGroup& H);
PermGroup normalizer_in_with_bound(const PermGroup& A, const PermGroup& H,
                                   uint64_t sweep_bound);

class CosetCanonicalizer;

/// Transitive action of G on the right cosets of H <= G. Point 0 is the
/// trivial coset H.
struct CosetAction {
  PermGroup image;               // generated by images of G's generators
  std::vector<Perm> coset_reps;  // canonical representative per point
  uint32_t degree = 0;

  /// Image of an arbitrary element of G in the coset action.
  Perm act(const Perm& g) const;

  std::shared_ptr<const CosetCanonicalizer> canon;
};
CosetAction coset_action(const PermGroup& G, const PermGroup& H);

inline constexpr uint64_t kNormalizerSweepBound = 10'000'000;
inline constexpr uint32_t kMaxPermDegree = 10'000;

}  // namespace regrep
