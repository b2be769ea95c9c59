#include "regrep/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace regrep {

std::string Count128::to_string() const {
  if (saturated) return "overflow(>=2^128)";
  unsigned __int128 v = value;
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Perm::Perm(uint32_t degree) : img_(degree) {
  std::iota(img_.begin(), img_.end(), 0);
}

Perm Perm::from_images(std::vector<uint32_t> images) {
  std::vector<char> seen(images.size(), 0);
  for (uint32_t v : images) {
    require(v < images.size() && !seen[v], ErrorCode::ParseError,
            "image array is not a permutation");
    seen[v] = 1;
  }
  Perm p;
  p.img_ = std::move(images);
  return p;
}

Perm Perm::operator*(const Perm& rhs) const {
  require(degree() == rhs.degree(), ErrorCode::DegreeMismatch,
          "composition of permutations of different degree");
  Perm out;
  out.img_.resize(degree());
  for (uint32_t v = 0; v < degree(); ++v) out.img_[v] = rhs.img_[img_[v]];
  return out;
}

Perm Perm::inverse() const {
  Perm out;
  out.img_.resize(degree());
  for (uint32_t v = 0; v < degree(); ++v) out.img_[img_[v]] = v;
  return out;
}

Perm Perm::conjugated_by(const Perm& g) const {
  return g.inverse() * (*this) * g;
}

bool Perm::is_identity() const {
  for (uint32_t v = 0; v < degree(); ++v)
    if (img_[v] != v) return false;
  return true;
}

uint64_t Perm::order() const {
  std::vector<char> done(degree(), 0);
  uint64_t ord = 1;
  for (uint32_t v = 0; v < degree(); ++v) {
    if (done[v]) continue;
    uint64_t len = 0;
    uint32_t w = v;
    do {
      done[w] = 1;
      w = img_[w];
      ++len;
    } while (w != v);
    ord = std::lcm(ord, len);
  }
  return ord;
}

std::string Perm::to_cycles() const {
  std::ostringstream os;
  std::vector<char> done(degree(), 0);
  bool any = false;
  for (uint32_t v = 0; v < degree(); ++v) {
    if (done[v] || img_[v] == v) {
      done[v] = 1;
      continue;
    }
    any = true;
    os << '(';
    uint32_t w = v;
    bool first = true;
    do {
      if (!first) os << ' ';
      os << w;
      first = false;
      done[w] = 1;
      w = img_[w];
    } while (w != v);
    os << ')';
  }
  if (!any) return "()";
  return os.str();
}

Perm Perm::parse_cycles(const std::string& text, uint32_t degree) {
  std::vector<uint32_t> img(degree);
  std::iota(img.begin(), img.end(), 0);
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == ',' || text[pos] == '\t'))
      ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    require(text[pos] == '(', ErrorCode::ParseError,
            "expected '(' at position " + std::to_string(pos) + " in '" +
                text + "'");
    ++pos;
    std::vector<uint32_t> cyc;
    skip_ws();
    while (pos < text.size() && text[pos] != ')') {
      require(isdigit(static_cast<unsigned char>(text[pos])),
              ErrorCode::ParseError,
              "expected point at position " + std::to_string(pos) + " in '" +
                  text + "'");
      uint32_t v = 0;
      while (pos < text.size() &&
             isdigit(static_cast<unsigned char>(text[pos])))
        v = v * 10 + (text[pos++] - '0');
      require(v < degree, ErrorCode::ParseError,
              "point " + std::to_string(v) + " out of range");
      cyc.push_back(v);
      skip_ws();
    }
    require(pos < text.size(), ErrorCode::ParseError, "unterminated cycle");
    ++pos;  // ')'
    for (size_t i = 0; i + 1 < cyc.size(); ++i) img[cyc[i]] = cyc[i + 1];
    if (cyc.size() > 1) img[cyc.back()] = cyc.front();
    skip_ws();
  }
  return from_images(std::move(img));
}

// ---------------------------------------------------------------------------
// Stabilizer chain

struct PermGroup::Chain {
  struct Level {
    uint32_t base_pt = 0;
    std::vector<Perm> gens;
    std::vector<uint32_t> orbit;    // discovery order, orbit[0] = base
    std::vector<int32_t> where;     // point -> orbit position or -1
    std::vector<Perm> transversal;  // base^transversal[i] = orbit[i]
    std::vector<std::pair<uint32_t, uint32_t>> pending;  // (orbit idx, gen idx)
  };
  uint32_t degree = 0;
  std::vector<Level> levels;

  void push_level(uint32_t base_pt) {
    Level L;
    L.base_pt = base_pt;
    L.where.assign(degree, -1);
    L.where[base_pt] = 0;
    L.orbit.push_back(base_pt);
    L.transversal.emplace_back(degree);
    levels.push_back(std::move(L));
  }

  void extend_orbit(size_t li) {
    Level& L = levels[li];
    for (size_t head = 0; head < L.orbit.size(); ++head) {
      for (size_t gi = 0; gi < L.gens.size(); ++gi) {
        uint32_t p = L.gens[gi][L.orbit[head]];
        if (L.where[p] < 0) {
          L.where[p] = static_cast<int32_t>(L.orbit.size());
          L.orbit.push_back(p);
          L.transversal.push_back(L.transversal[head] * L.gens[gi]);
          for (size_t g2 = 0; g2 < L.gens.size(); ++g2)
            L.pending.emplace_back(static_cast<uint32_t>(L.orbit.size() - 1),
                                   static_cast<uint32_t>(g2));
        }
      }
    }
  }

  void add_level_gen(size_t li, const Perm& g) {
    Level& L = levels[li];
    L.gens.push_back(g);
    const uint32_t gi = static_cast<uint32_t>(L.gens.size() - 1);
    for (size_t q = 0; q < L.orbit.size(); ++q)
      L.pending.emplace_back(static_cast<uint32_t>(q), gi);
    extend_orbit(li);
  }

  void sift_add(size_t li, Perm g) {
    for (;;) {
      if (g.is_identity()) return;
      if (li == levels.size()) {
        uint32_t bp = UINT32_MAX;
        for (uint32_t v = 0; v < degree; ++v)
          if (g[v] != v) {
            bp = v;
            break;
          }
        push_level(bp);
      }
      Level& L = levels[li];
      const int32_t w = L.where[g[L.base_pt]];
      if (w < 0) {
        add_level_gen(li, g);
        return;
      }
      g = g * L.transversal[w].inverse();
      ++li;
    }
  }

  // Residue after sifting; identity iff argument is a member.
  Perm sift(Perm p) const {
    for (const Level& L : levels) {
      if (p.is_identity()) return p;
      const int32_t w = L.where[p[L.base_pt]];
      if (w < 0) return p;
      p = p * L.transversal[w].inverse();
    }
    return p;
  }
};

std::shared_ptr<const PermGroup::Chain> PermGroup::build_chain(
    uint32_t degree, const std::vector<Perm>& gens,
    const std::vector<uint32_t>& base_hint) {
  auto chain = std::make_shared<Chain>();
  chain->degree = degree;
  // Hinted base points get their levels up front, so the chain is
  // guaranteed to stabilize them in the requested order.
  for (uint32_t hint : base_hint) chain->push_level(hint);
  for (const Perm& g : gens) chain->sift_add(0, g);
  // Drain Schreier generators level by level; processing level i only
  // enqueues work at levels > i, so one pass suffices.
  for (size_t li = 0; li < chain->levels.size(); ++li) {
    for (size_t head = 0; head < chain->levels[li].pending.size(); ++head) {
      const auto [qi, gi] = chain->levels[li].pending[head];
      Perm schreier;
      {
        const auto& L = chain->levels[li];
        const int32_t target = L.where[L.gens[gi][L.orbit[qi]]];
        schreier =
            L.transversal[qi] * L.gens[gi] * L.transversal[target].inverse();
      }
      chain->sift_add(li + 1, std::move(schreier));
    }
    chain->levels[li].pending.clear();
    chain->levels[li].pending.shrink_to_fit();
  }
  return chain;
}

PermGroup::PermGroup(uint32_t degree, std::vector<Perm> generators)
    : degree_(degree), gens_(std::move(generators)) {
  require(degree <= kMaxPermDegree, ErrorCode::TooLarge,
          "permutation degree exceeds engine bound");
  for (const Perm& g : gens_)
    require(g.degree() == degree, ErrorCode::DegreeMismatch,
            "generator degree mismatch");
  gens_.erase(std::remove_if(gens_.begin(), gens_.end(),
                             [](const Perm& p) { return p.is_identity(); }),
              gens_.end());
}

void PermGroup::freeze() const {
  if (!chain_) chain_ = build_chain(degree_, gens_, {});
}

PermGroup with_base_hint(const PermGroup& G, const std::vector<uint32_t>& hint) {
  PermGroup out(G.degree_, G.gens_);
  out.chain_ = PermGroup::build_chain(G.degree_, G.gens_, hint);
  return out;
}

Count128 PermGroup::order() const {
  freeze();
  Count128 ord = Count128::one();
  for (const auto& L : chain_->levels)
    ord.mul(static_cast<uint64_t>(L.orbit.size()));
  return ord;
}

bool PermGroup::contains(const Perm& p) const {
  require(p.degree() == degree_, ErrorCode::DegreeMismatch,
          "membership degree mismatch");
  freeze();
  return chain_->sift(p).is_identity();
}

bool PermGroup::is_subgroup_of(const PermGroup& other) const {
  for (const Perm& g : gens_)
    if (!other.contains(g)) return false;
  return true;
}

bool PermGroup::trivial() const { return gens_.empty(); }

std::vector<std::vector<uint32_t>> PermGroup::orbits() const {
  std::vector<std::vector<uint32_t>> out;
  std::vector<char> done(degree_, 0);
  for (uint32_t v = 0; v < degree_; ++v) {
    if (done[v]) continue;
    std::vector<uint32_t> orb{v};
    done[v] = 1;
    for (size_t head = 0; head < orb.size(); ++head)
      for (const Perm& g : gens_) {
        uint32_t w = g[orb[head]];
        if (!done[w]) {
          done[w] = 1;
          orb.push_back(w);
        }
      }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

std::vector<uint32_t> PermGroup::orbit_of(uint32_t point) const {
  std::vector<uint32_t> orb{point};
  std::vector<char> done(degree_, 0);
  done[point] = 1;
  for (size_t head = 0; head < orb.size(); ++head)
    for (const Perm& g : gens_) {
      uint32_t w = g[orb[head]];
      if (!done[w]) {
        done[w] = 1;
        orb.push_back(w);
      }
    }
  std::sort(orb.begin(), orb.end());
  return orb;
}

bool PermGroup::transitive() const {
  return degree_ == 0 || orbit_of(0).size() == degree_;
}

PermGroup PermGroup::point_stabilizer(uint32_t point) const {
  require(point < degree_, ErrorCode::DegreeMismatch, "point out of range");
  PermGroup rebased = with_base_hint(*this, {point});
  std::vector<Perm> stab_gens;
  for (const auto& L : rebased.chain_->levels) {
    if (L.base_pt == point) continue;
    for (const Perm& g : L.gens)
      if (g[point] == point) stab_gens.push_back(g);
  }
  std::sort(stab_gens.begin(), stab_gens.end());
  stab_gens.erase(std::unique(stab_gens.begin(), stab_gens.end()),
                  stab_gens.end());
  return PermGroup(degree_, std::move(stab_gens));
}

std::vector<uint32_t> PermGroup::base() const {
  freeze();
  std::vector<uint32_t> out;
  for (const auto& L : chain_->levels) out.push_back(L.base_pt);
  return out;
}

bool PermGroup::for_each_element(
    const std::function<bool(const Perm&)>& fn) const {
  freeze();
  const auto& levels = chain_->levels;
  // Every element factors uniquely as u_{k-1} * ... * u_0 with u_i from
  // the level-i transversal.
  std::function<bool(size_t, const Perm&)> rec = [&](size_t li,
                                                     const Perm& prefix) {
    if (li == levels.size()) return fn(prefix);
    for (const Perm& u : levels[li].transversal) {
      if (!rec(li + 1, u * prefix)) return false;
    }
    return true;
  };
  return rec(0, Perm(degree_));
}

std::vector<Perm> PermGroup::elements(uint64_t limit) const {
  Count128 ord = order();
  require(!ord.greater_than_u64(limit), ErrorCode::TooLarge,
          "group too large for element enumeration");
  std::vector<Perm> out;
  out.reserve(static_cast<size_t>(ord.as_u64()));
  for_each_element([&](const Perm& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Regular representation

Perm right_translation(const SquarefreeGroup& R, const GroupElement& g) {
  std::vector<uint32_t> img(R.size());
  for (uint32_t v = 0; v < R.size(); ++v)
    img[v] = R.index_of(R.mul(R.element_at(v), g));
  return Perm::from_images(std::move(img));
}

PermGroup regular_representation(const SquarefreeGroup& R) {
  std::vector<Perm> gens;
  for (const GroupElement& g : {R.z(), R.y(), R.x()})
    if (!(g == R.identity())) gens.push_back(right_translation(R, g));
  return PermGroup(R.size(), std::move(gens));
}

bool in_regular_image(const SquarefreeGroup& R, const Perm& p) {
  if (p.degree() != R.size()) return false;
  return p == right_translation(R, R.element_at(p[0]));
}

// ---------------------------------------------------------------------------
// Normalizer

namespace {

bool normalizes(const Perm& g, const PermGroup& H) {
  for (const Perm& h : H.generators())
    if (!H.contains(h.conjugated_by(g))) return false;
  return true;
}

}  // namespace

PermGroup normalizer_in_with_bound(const PermGroup& A, const PermGroup& H,
                                   uint64_t sweep_bound) {
  require(H.is_subgroup_of(A), ErrorCode::NotSubgroup,
          "normalizer_in requires H <= A");
  H.freeze();
  if (!A.order().greater_than_u64(sweep_bound)) {
    std::vector<Perm> found;
    PermGroup N(A.degree(), {});
    A.for_each_element([&](const Perm& g) {
      if (normalizes(g, H) && !N.contains(g)) {
        found.push_back(g);
        N = PermGroup(A.degree(), found);
      }
      return true;
    });
    return N;
  }

  // Base-image backtracking. Sound but lightly pruned: candidates must
  // map H-orbits to H-orbits of the same size, consistently.
  const auto orbs = H.orbits();
  std::vector<uint32_t> orbit_id(A.degree()), orbit_size(A.degree());
  for (uint32_t oi = 0; oi < orbs.size(); ++oi)
    for (uint32_t v : orbs[oi]) {
      orbit_id[v] = oi;
      orbit_size[v] = static_cast<uint32_t>(orbs[oi].size());
    }

  std::vector<Perm> found;
  PermGroup N(A.degree(), {});
  std::function<void(const PermGroup&, const Perm&, std::vector<int32_t>&)>
      dfs = [&](const PermGroup& G, const Perm& partial,
                std::vector<int32_t>& omap) {
        uint32_t bp = UINT32_MAX;
        for (const Perm& g : G.generators()) {
          for (uint32_t v = 0; v < A.degree(); ++v)
            if (g[v] != v) {
              bp = v;
              break;
            }
          if (bp != UINT32_MAX) break;
        }
        if (bp == UINT32_MAX) {
          if (!partial.is_identity() && normalizes(partial, H) &&
              !N.contains(partial)) {
            found.push_back(partial);
            N = PermGroup(A.degree(), found);
          }
          return;
        }
        PermGroup stab = G.point_stabilizer(bp);
        // BFS tree over the orbit gives a transversal element per image.
        std::vector<int32_t> prev(A.degree(), -1);
        std::vector<uint32_t> via(A.degree(), 0);
        std::vector<uint32_t> queue{bp};
        prev[bp] = static_cast<int32_t>(bp);
        for (size_t head = 0; head < queue.size(); ++head)
          for (uint32_t gi = 0; gi < G.generators().size(); ++gi) {
            uint32_t w = G.generators()[gi][queue[head]];
            if (prev[w] < 0) {
              prev[w] = static_cast<int32_t>(queue[head]);
              via[w] = gi;
              queue.push_back(w);
            }
          }
        for (uint32_t img : queue) {
          const uint32_t final_img = partial[img];
          if (orbit_size[bp] != orbit_size[final_img]) continue;
          const uint32_t src_orb = orbit_id[bp];
          const uint32_t dst_orb = orbit_id[final_img];
          if (omap[src_orb] >= 0 &&
              omap[src_orb] != static_cast<int32_t>(dst_orb))
            continue;
          Perm u(A.degree());
          {
            std::vector<uint32_t> path;
            for (uint32_t v = img; v != bp; v = static_cast<uint32_t>(prev[v]))
              path.push_back(via[v]);
            std::reverse(path.begin(), path.end());
            for (uint32_t gi : path) u = u * G.generators()[gi];
          }
          const int32_t saved = omap[src_orb];
          omap[src_orb] = static_cast<int32_t>(dst_orb);
          dfs(stab, u * partial, omap);
          omap[src_orb] = saved;
        }
      };
  std::vector<int32_t> omap(orbs.size(), -1);
  dfs(A, Perm(A.degree()), omap);
  return N;
}

PermGroup normalizer_in(const PermGroup& A, const PermGroup& H) {
  return normalizer_in_with_bound(A, H, kNormalizerSweepBound);
}

// ---------------------------------------------------------------------------
// Coset action

// Stabilizer chain with base locked to (0, 1, 2, ...), built level by
// level from Schreier generators; supports canonical minimum coset
// representatives min_{h in H} image-vector(h * g).
class CosetCanonicalizer {
 public:
  CosetCanonicalizer(uint32_t degree, const std::vector<Perm>& gens) {
    std::vector<Perm> level_gens = gens;
    for (uint32_t p = 0; p < degree && !level_gens.empty(); ++p) {
      bool moved = false;
      for (const Perm& g : level_gens)
        if (g[p] != p) {
          moved = true;
          break;
        }
      if (!moved) continue;
      Level L;
      L.point = p;
      L.where.assign(degree, -1);
      L.where[p] = 0;
      L.orbit.push_back(p);
      L.transversal.emplace_back(degree);
      for (size_t head = 0; head < L.orbit.size(); ++head)
        for (const Perm& g : level_gens) {
          uint32_t w = g[L.orbit[head]];
          if (L.where[w] < 0) {
            L.where[w] = static_cast<int32_t>(L.orbit.size());
            L.orbit.push_back(w);
            L.transversal.push_back(L.transversal[head] * g);
          }
        }
      std::vector<Perm> next;
      for (size_t qi = 0; qi < L.orbit.size(); ++qi)
        for (const Perm& g : level_gens) {
          Perm s = L.transversal[qi] * g *
                   L.transversal[L.where[g[L.orbit[qi]]]].inverse();
          if (!s.is_identity()) next.push_back(s);
        }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      level_gens = std::move(next);
      levels_.push_back(std::move(L));
    }
  }

  Perm min_rep(Perm g) const {
    for (const Level& L : levels_) {
      uint32_t best = L.orbit[0];
      uint32_t best_img = g[best];
      for (uint32_t o : L.orbit)
        if (g[o] < best_img) {
          best = o;
          best_img = g[o];
        }
      g = L.transversal[L.where[best]] * g;
    }
    return g;
  }

 private:
  struct Level {
    uint32_t point = 0;
    std::vector<uint32_t> orbit;
    std::vector<int32_t> where;
    std::vector<Perm> transversal;
  };
  std::vector<Level> levels_;
};

Perm CosetAction::act(const Perm& g) const {
  std::map<std::vector<uint32_t>, uint32_t> index;
  for (uint32_t i = 0; i < degree; ++i)
    index[coset_reps[i].images()] = i;
  std::vector<uint32_t> img(degree);
  for (uint32_t i = 0; i < degree; ++i) {
    auto it = index.find(canon->min_rep(coset_reps[i] * g).images());
    require(it != index.end(), ErrorCode::NotSubgroup,
            "element does not permute the cosets (not in G?)");
    img[i] = it->second;
  }
  return Perm::from_images(std::move(img));
}

CosetAction coset_action(const PermGroup& G, const PermGroup& H) {
  require(H.is_subgroup_of(G), ErrorCode::NotSubgroup,
          "coset_action requires H <= G");
  Count128 go = G.order(), ho = H.order();
  require(go.fits_u64() && ho.fits_u64(), ErrorCode::TooLarge,
          "coset action group order too large");
  const uint64_t index = go.as_u64() / ho.as_u64();
  require(index <= 10'000, ErrorCode::IndexTooLarge,
          "coset action index exceeds 10^4");

  CosetAction act;
  act.canon = std::make_shared<CosetCanonicalizer>(G.degree(), H.generators());
  std::map<std::vector<uint32_t>, uint32_t> idx;
  std::vector<Perm> reps;
  reps.push_back(act.canon->min_rep(Perm(G.degree())));
  idx[reps[0].images()] = 0;
  for (size_t head = 0; head < reps.size(); ++head) {
    for (const Perm& g : G.generators()) {
      Perm r = act.canon->min_rep(reps[head] * g);
      if (!idx.count(r.images())) {
        idx[r.images()] = static_cast<uint32_t>(reps.size());
        reps.push_back(std::move(r));
      }
    }
  }
  require(reps.size() == index, ErrorCode::Internal,
          "coset enumeration found wrong index");

  act.degree = static_cast<uint32_t>(reps.size());
  std::vector<Perm> image_gens;
  for (const Perm& g : G.generators()) {
    std::vector<uint32_t> img(reps.size());
    for (uint32_t i = 0; i < reps.size(); ++i)
      img[i] = idx.at(act.canon->min_rep(reps[i] * g).images());
    image_gens.push_back(Perm::from_images(std::move(img)));
  }
  act.image = PermGroup(act.degree, std::move(image_gens));
  act.coset_reps = std::move(reps);
  return act;
}

}  // namespace regrep
