#include "regrep/aut_search.hpp"

#include <algorithm>

#include "regrep/errors.hpp"

namespace regrep {

namespace {

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

void BitGraph::reset(uint32_t num_vertices) {
  n = num_vertices;
  words = (n + 63) / 64;
  out_bits.assign(size_t(n) * words, 0);
  in_bits.assign(size_t(n) * words, 0);
  out_off.clear();
  in_off.clear();
  out_lst.clear();
  in_lst.clear();
}

void BitGraph::add_arc(uint32_t from, uint32_t to) {
  out_bits[size_t(from) * words + (to >> 6)] |= uint64_t(1) << (to & 63);
  in_bits[size_t(to) * words + (from >> 6)] |= uint64_t(1) << (from & 63);
}

void BitGraph::build_lists() {
  out_off.assign(n + 1, 0);
  in_off.assign(n + 1, 0);
  out_lst.clear();
  in_lst.clear();
  for (uint32_t v = 0; v < n; ++v) {
    out_off[v] = static_cast<uint32_t>(out_lst.size());
    const uint64_t* row = &out_bits[size_t(v) * words];
    for (uint32_t w = 0; w < words; ++w) {
      uint64_t bits = row[w];
      while (bits) {
        out_lst.push_back(w * 64 + static_cast<uint32_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }
  out_off[n] = static_cast<uint32_t>(out_lst.size());
  for (uint32_t v = 0; v < n; ++v) {
    in_off[v] = static_cast<uint32_t>(in_lst.size());
    const uint64_t* row = &in_bits[size_t(v) * words];
    for (uint32_t w = 0; w < words; ++w) {
      uint64_t bits = row[w];
      while (bits) {
        in_lst.push_back(w * 64 + static_cast<uint32_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }
  in_off[n] = static_cast<uint32_t>(in_lst.size());
}

void AutSearch::Partition::assign_single_cell(uint32_t n) {
  vtx.resize(n);
  pos.resize(n);
  cell_of.resize(n);
  cell_end.resize(n);
  for (uint32_t v = 0; v < n; ++v) {
    vtx[v] = v;
    pos[v] = v;
    cell_of[v] = 0;
  }
  if (n > 0) cell_end[0] = n;
  non_singletons = n > 1 ? 1 : 0;
}

void AutSearch::load(const BitGraph& g) {
  g_ = &g;
  const uint32_t n = g.n;
  cnt_out_.assign(n, 0);
  cnt_in_.assign(n, 0);
  stamp_.assign(n, 0);
  epoch_ = 0;
  levels_.clear();
  nodes_ = 0;
}

void AutSearch::initial_partition(Partition& p) {
  const uint32_t n = g_->n;
  p.assign_single_cell(n);
  if (n <= 1) return;
  // Color by (out_deg, in_deg), ascending; for regular digraphs this is a
  // single cell and the refinement below does the work.
  sort_buf_.clear();
  for (uint32_t v = 0; v < n; ++v) {
    uint32_t od = g_->out_off[v + 1] - g_->out_off[v];
    uint32_t id = g_->in_off[v + 1] - g_->in_off[v];
    sort_buf_.emplace_back((od << 16) | id, v);
  }
  std::stable_sort(sort_buf_.begin(), sort_buf_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  p.non_singletons = 0;
  uint32_t start = 0;
  for (uint32_t i = 0; i < n; ++i) {
    p.vtx[i] = sort_buf_[i].second;
    p.pos[p.vtx[i]] = i;
    if (i + 1 == n || sort_buf_[i + 1].first != sort_buf_[start].first) {
      for (uint32_t k = start; k <= i; ++k) p.cell_of[p.vtx[k]] = start;
      p.cell_end[start] = i + 1;
      if (i + 1 - start > 1) ++p.non_singletons;
      start = i + 1;
    }
  }
}

// Equitable refinement: repeatedly split cells by (arcs into splitter,
// arcs out of splitter) counts until stable. Returns a trace hash of the
// split events, which is invariant under relabeling.
uint64_t AutSearch::refine(Partition& p) {
  uint64_t trace = 0xcbf29ce484222325ull;
  const uint32_t n = g_->n;
  // queue_ holds cell start indices; stale entries are harmless (they
  // name the current, possibly smaller, cell at that start).
  for (size_t head = 0; head < queue_.size(); ++head) {
    if (p.non_singletons == 0) break;
    const uint32_t ws = queue_[head];
    const uint32_t we = p.cell_end[ws];

    ++epoch_;
    touched_.clear();
    for (uint32_t wi = ws; wi < we; ++wi) {
      const uint32_t w = p.vtx[wi];
      for (uint32_t k = g_->in_off[w]; k < g_->in_off[w + 1]; ++k) {
        const uint32_t u = g_->in_lst[k];
        if (stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          cnt_out_[u] = 0;
          cnt_in_[u] = 0;
          touched_.push_back(u);
        }
        ++cnt_out_[u];
      }
      for (uint32_t k = g_->out_off[w]; k < g_->out_off[w + 1]; ++k) {
        const uint32_t u = g_->out_lst[k];
        if (stamp_[u] != epoch_) {
          stamp_[u] = epoch_;
          cnt_out_[u] = 0;
          cnt_in_[u] = 0;
          touched_.push_back(u);
        }
        ++cnt_in_[u];
      }
    }

    affected_cells_.clear();
    for (uint32_t u : touched_) {
      const uint32_t cs = p.cell_of[u];
      if (p.cell_end[cs] - cs <= 1) continue;
      if (std::find(affected_cells_.begin(), affected_cells_.end(), cs) ==
          affected_cells_.end())
        affected_cells_.push_back(cs);
    }
    std::sort(affected_cells_.begin(), affected_cells_.end());

    for (uint32_t cs : affected_cells_) {
      const uint32_t ce = p.cell_end[cs];
      // Keys default to 0 for members not touched this round.
      sort_buf_.clear();
      bool uniform = true;
      uint32_t key0 = UINT32_MAX;
      for (uint32_t i = cs; i < ce; ++i) {
        const uint32_t v = p.vtx[i];
        const uint32_t key =
            stamp_[v] == epoch_ ? (cnt_out_[v] << 11 | cnt_in_[v]) : 0;
        if (key0 == UINT32_MAX)
          key0 = key;
        else if (key != key0)
          uniform = false;
        sort_buf_.emplace_back(key, v);
      }
      if (uniform) continue;
      std::stable_sort(
          sort_buf_.begin(), sort_buf_.end(),
          [](const auto& a, const auto& b) { return a.first < b.first; });

      trace = hash_mix(trace, cs);
      --p.non_singletons;  // original cell was non-singleton
      uint32_t sub_start = cs;
      for (uint32_t i = 0; i < sort_buf_.size(); ++i) {
        const uint32_t idx = cs + i;
        const uint32_t v = sort_buf_[i].second;
        p.vtx[idx] = v;
        p.pos[v] = idx;
        const bool last_of_key = (i + 1 == sort_buf_.size()) ||
                                 (sort_buf_[i + 1].first != sort_buf_[i].first);
        if (last_of_key) {
          for (uint32_t k = sub_start; k <= idx; ++k)
            p.cell_of[p.vtx[k]] = sub_start;
          p.cell_end[sub_start] = idx + 1;
          if (idx + 1 - sub_start > 1) ++p.non_singletons;
          trace = hash_mix(trace, sort_buf_[i].first);
          trace = hash_mix(trace, idx + 1 - sub_start);
          queue_.push_back(sub_start);
          sub_start = idx + 1;
        }
      }
    }
  }
  queue_.clear();
  return trace;
}

uint64_t AutSearch::individualize_refine(Partition& p, uint32_t v) {
  ++nodes_;
  const uint32_t cs = p.cell_of[v];
  const uint32_t ce = p.cell_end[cs];
  queue_.clear();
  queue_.push_back(cs);
  if (ce - cs > 1) {
    // Move v to the front of its cell, making {v} a new singleton cell.
    const uint32_t vp = p.pos[v];
    const uint32_t other = p.vtx[cs];
    p.vtx[cs] = v;
    p.vtx[vp] = other;
    p.pos[v] = cs;
    p.pos[other] = vp;
    p.cell_end[cs] = cs + 1;
    p.cell_of[v] = cs;
    const uint32_t rest = cs + 1;
    for (uint32_t i = rest; i < ce; ++i) p.cell_of[p.vtx[i]] = rest;
    p.cell_end[rest] = ce;
    if (ce - cs == 2)
      --p.non_singletons;  // cell of size 2 became two singletons
    queue_.push_back(rest);
  }
  uint64_t trace = hash_mix(0x100001b3ull, cs);
  return hash_mix(trace, refine(p));
}

int32_t AutSearch::target_cell(const Partition& p) const {
  // Smallest non-singleton cell; ties broken by lowest start. Both are
  // label-invariant.
  const uint32_t n = g_->n;
  uint32_t best = UINT32_MAX, best_size = UINT32_MAX;
  uint32_t s = 0;
  while (s < n) {
    const uint32_t e = p.cell_end[s];
    const uint32_t size = e - s;
    if (size > 1 && size < best_size) {
      best = s;
      best_size = size;
    }
    s = e;
  }
  return best == UINT32_MAX ? -1 : static_cast<int32_t>(best);
}

void AutSearch::build_left_path() {
  Partition p;
  initial_partition(p);
  queue_.clear();
  uint32_t s = 0;
  while (s < g_->n) {
    queue_.push_back(s);
    s = p.cell_end[s];
  }
  refine(p);
  while (!p.discrete()) {
    Level lvl;
    lvl.before = p;
    lvl.cell_start = static_cast<uint32_t>(target_cell(p));
    lvl.base_vertex = p.vtx[lvl.cell_start];
    lvl.trace = individualize_refine(p, lvl.base_vertex);
    levels_.push_back(std::move(lvl));
  }
  left_leaf_ = p.vtx;
}

bool AutSearch::extract_automorphism(const Partition& leaf,
                                     std::vector<uint32_t>& out) {
  const uint32_t n = g_->n;
  out.resize(n);
  for (uint32_t i = 0; i < n; ++i) out[left_leaf_[i]] = leaf.vtx[i];
  // Arc-preservation check; arc counts match, so preserving all arcs
  // forward is enough.
  for (uint32_t u = 0; u < n; ++u) {
    const uint32_t gu = out[u];
    for (uint32_t k = g_->out_off[u]; k < g_->out_off[u + 1]; ++k) {
      if (!g_->arc(gu, out[g_->out_lst[k]])) return false;
    }
  }
  return true;
}

bool AutSearch::dfs_extend(Partition& p, size_t depth,
                           std::vector<uint32_t>& out) {
  if (p.discrete()) return extract_automorphism(p, out);
  if (depth >= levels_.size()) return false;  // trace said discrete; mismatch
  const uint32_t cs = levels_[depth].cell_start;
  // Matching traces guarantee the same cell boundary structure.
  if (p.cell_of[p.vtx[cs]] != cs) return false;
  const uint32_t ce = p.cell_end[cs];
  for (uint32_t i = cs; i < ce; ++i) {
    const uint32_t v = p.vtx[i];
    Partition& child = dfs_pool_[depth];
    child = p;
    if (individualize_refine(child, v) != levels_[depth].trace) continue;
    if (dfs_extend(child, depth + 1, out)) return true;
  }
  return false;
}

bool AutSearch::find_automorphism(size_t level, uint32_t v,
                                  std::vector<uint32_t>& out) {
  Partition p = levels_[level].before;
  if (individualize_refine(p, v) != levels_[level].trace) return false;
  return dfs_extend(p, level + 1, out);
}

AutSearch::Result AutSearch::automorphism_group(const BitGraph& g) {
  load(g);
  Result res;
  res.order = Count128::one();
  if (g.n <= 1) return res;
  build_left_path();
  dfs_pool_.assign(levels_.size() + 1, Partition{});

  std::vector<uint32_t> img;
  std::vector<uint32_t> orbit_buf;
  std::vector<char> in_orbit(g.n, 0);
  for (size_t level = levels_.size(); level-- > 0;) {
    const Level& lvl = levels_[level];
    // Orbit of the base vertex under the automorphisms found so far; all
    // of them fix the earlier base vertices.
    std::fill(in_orbit.begin(), in_orbit.end(), 0);
    orbit_buf.clear();
    orbit_buf.push_back(lvl.base_vertex);
    in_orbit[lvl.base_vertex] = 1;
    auto grow_orbit = [&]() {
      for (size_t head = 0; head < orbit_buf.size(); ++head)
        for (const Perm& q : res.generators) {
          uint32_t w = q[orbit_buf[head]];
          if (!in_orbit[w]) {
            in_orbit[w] = 1;
            orbit_buf.push_back(w);
          }
        }
    };
    grow_orbit();
    const uint32_t ce = lvl.before.cell_end[lvl.cell_start];
    for (uint32_t i = lvl.cell_start; i < ce; ++i) {
      const uint32_t v = lvl.before.vtx[i];
      if (in_orbit[v]) continue;
      if (find_automorphism(level, v, img)) {
        res.generators.push_back(Perm::from_images(img));
        grow_orbit();
        require(in_orbit[v], ErrorCode::Internal,
                "found automorphism does not move base into candidate");
      }
    }
    res.order.mul(orbit_buf.size());
  }
  res.tree_nodes = nodes_;
  return res;
}

bool AutSearch::stabilizer_trivial(const BitGraph& g, uint32_t fixed_vertex) {
  load(g);
  if (g.n <= 1) return true;

  Partition p;
  initial_partition(p);
  queue_.clear();
  uint32_t s = 0;
  while (s < g.n) {
    queue_.push_back(s);
    s = p.cell_end[s];
  }
  refine(p);
  if (p.cell_end[p.cell_of[fixed_vertex]] - p.cell_of[fixed_vertex] > 1)
    individualize_refine(p, fixed_vertex);
  while (!p.discrete()) {
    Level lvl;
    lvl.before = p;
    lvl.cell_start = static_cast<uint32_t>(target_cell(p));
    lvl.base_vertex = p.vtx[lvl.cell_start];
    lvl.trace = individualize_refine(p, lvl.base_vertex);
    levels_.push_back(std::move(lvl));
  }
  left_leaf_ = p.vtx;
  dfs_pool_.assign(levels_.size() + 1, Partition{});

  std::vector<uint32_t> img;
  for (size_t level = 0; level < levels_.size(); ++level) {
    const Level& lvl = levels_[level];
    const uint32_t ce = lvl.before.cell_end[lvl.cell_start];
    for (uint32_t i = lvl.cell_start; i < ce; ++i) {
      const uint32_t v = lvl.before.vtx[i];
      if (v == lvl.base_vertex) continue;
      if (find_automorphism(level, v, img)) return false;
    }
  }
  return true;
}

}  // namespace regrep
