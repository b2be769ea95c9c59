#pragma once

#include <cstdint>
#include <string>

namespace regrep {

// Saturating 128-bit counter for permutation group orders. Orders beyond
// 2^128 - 1 (e.g. Sym(n) on large degenerate digraphs) saturate; all
// comparisons against in-range values stay correct.
struct Count128 {
  unsigned __int128 value = 0;
  bool saturated = false;

  static Count128 one() { return Count128{1, false}; }
  static Count128 from_u64(uint64_t v) { return Count128{v, false}; }

  Count128& mul(uint64_t factor) {
    if (saturated) return *this;
    if (factor != 0 && value > ~static_cast<unsigned __int128>(0) / factor) {
      saturated = true;
      value = ~static_cast<unsigned __int128>(0);
    } else {
      value *= factor;
    }
    return *this;
  }

  bool fits_u64() const { return !saturated && value <= UINT64_MAX; }
  uint64_t as_u64() const { return static_cast<uint64_t>(value); }

  bool operator==(const Count128& o) const {
    return saturated == o.saturated && value == o.value;
  }
  bool equals_u64(uint64_t v) const { return !saturated && value == v; }
  bool greater_than_u64(uint64_t v) const { return saturated || value > v; }

  std::string to_string() const;
};

}  // namespace regrep
