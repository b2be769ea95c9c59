#pragma once

#include <cstdint>
#include <vector>

#include "regrep/count128.hpp"
#include "regrep/perm.hpp"

namespace regrep {

/// Digraph with adjacency stored both as bitset rows (O(1) arc tests)
/// and as flat neighbor lists (fast iteration). Reusable across many
/// graphs of the same size without reallocation.
struct BitGraph {
  uint32_t n = 0;
  uint32_t words = 0;
  std::vector<uint64_t> out_bits, in_bits;  // row-major, n*words each
  std::vector<uint32_t> out_off, in_off;    // size n+1
  std::vector<uint32_t> out_lst, in_lst;

  void reset(uint32_t num_vertices);
  void add_arc(uint32_t from, uint32_t to);
  void build_lists();

  bool arc(uint32_t from, uint32_t to) const {
    return (out_bits[size_t(from) * words + (to >> 6)] >> (to & 63)) & 1;
  }
  uint64_t num_arcs() const { return out_lst.size(); }
};

/// Equitable-refinement + backtracking automorphism search for digraphs.
/// Vertices are initially colored by (out-degree, in-degree); refinement
/// splits cells by arc counts into/out of splitter cells; the backtrack
/// tree prunes with refinement traces and with orbits of the
/// automorphisms already discovered. Buffers are reused across calls, so
/// keep one AutSearch per thread.
class AutSearch {
 public:
  struct Result {
    std::vector<Perm> generators;
    Count128 order;
    uint64_t tree_nodes = 0;
  };

  /// Generators and order of the full automorphism group.
  Result automorphism_group(const BitGraph& g);

  /// True iff the only automorphism fixing `fixed_vertex` is the
  /// identity. Early-exits as soon as a nontrivial one is found.
  bool stabilizer_trivial(const BitGraph& g, uint32_t fixed_vertex);

 private:
  struct Partition {
    std::vector<uint32_t> vtx;       // vertices ordered by cell
    std::vector<uint32_t> pos;       // pos[v]: index in vtx
    std::vector<uint32_t> cell_of;   // cell_of[v]: start index of v's cell
    std::vector<uint32_t> cell_end;  // valid at cell starts
    uint32_t non_singletons = 0;

    void assign_single_cell(uint32_t n);
    bool discrete() const { return non_singletons == 0; }
  };

  struct Level {
    Partition before;       // partition prior to individualizing the base
    uint32_t cell_start;    // target cell (in `before`)
    uint32_t base_vertex;   // leftmost choice
    uint64_t trace;         // expected trace of individualize+refine
  };

  const BitGraph* g_ = nullptr;
  Partition work_;
  std::vector<Level> levels_;
  std::vector<uint32_t> left_leaf_;  // position -> vertex at leftmost leaf

  // scratch
  std::vector<uint32_t> cnt_out_, cnt_in_, stamp_;
  uint32_t epoch_ = 0;
  std::vector<uint32_t> touched_, affected_cells_, queue_;
  std::vector<std::pair<uint32_t, uint32_t>> sort_buf_;  // (key, vertex)
  std::vector<Partition> dfs_pool_;
  uint64_t nodes_ = 0;

  void load(const BitGraph& g);
  void initial_partition(Partition& p);
  uint64_t refine(Partition& p);
  uint64_t individualize_refine(Partition& p, uint32_t v);
  int32_t target_cell(const Partition& p) const;
  void build_left_path();
  bool extract_automorphism(const Partition& leaf, std::vector<uint32_t>& out);
  bool dfs_extend(Partition& p, size_t depth, std::vector<uint32_t>& out);
  bool find_automorphism(size_t level, uint32_t v, std::vector<uint32_t>& out);
};

}  // namespace regrep
