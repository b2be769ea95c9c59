#pragma once

#include <cstdint>
#include <vector>

#include "regrep/group.hpp"

namespace regrep {

/// A subset S of R \ {identity}, stored as a membership bit-vector over
/// element indices. Immutable once built; the inverse-closure flag is
/// computed at construction.
class ConnectionSet {
 public:
  explicit ConnectionSet(const SquarefreeGroup& R);  // empty set
  static ConnectionSet from_indices(const SquarefreeGroup& R,
                                    std::vector<uint32_t> indices);
  static ConnectionSet from_elements(const SquarefreeGroup& R,
                                     const std::vector<GroupElement>& elts);
  /// Bit i of mask corresponds to element index i + 1 (identity skipped);
  /// only valid for |R| <= 65.
  static ConnectionSet from_mask(const SquarefreeGroup& R, uint64_t mask);

  const SquarefreeGroup& group() const { return group_; }
  bool contains(uint32_t elt_index) const { return member_[elt_index]; }
  const std::vector<uint32_t>& indices() const { return indices_; }
  uint32_t size() const { return static_cast<uint32_t>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool inverse_closed() const { return inverse_closed_; }

  uint64_t mask() const;           // inverse of from_mask
  ConnectionSet inverted() const;  // S^{-1}

  bool operator==(const ConnectionSet& o) const {
    return member_ == o.member_;
  }

 private:
  SquarefreeGroup group_;
  std::vector<char> member_;
  std::vector<uint32_t> indices_;
  bool inverse_closed_ = true;
};

}  // namespace regrep
