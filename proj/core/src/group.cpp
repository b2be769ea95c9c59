#include "regrep/group.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "regrep/group_aut.hpp"

namespace regrep {

namespace {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t n) { return a * b % n; }

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t n) {
  if (n == 1) return 0;
  uint64_t r = 1;
  base %= n;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, n);
    base = mul_mod(base, base, n);
    exp >>= 1;
  }
  return r;
}

uint64_t mult_order_mod(uint64_t j, uint64_t n) {
  if (n == 1) return 1;
  uint64_t v = j % n, ord = 1;
  while (v != 1) {
    v = mul_mod(v, j, n);
    ++ord;
    if (ord > n) fail(ErrorCode::BadAction, "j is not a unit mod n");
  }
  return ord;
}

// Isomorphism-class representative: j is replaceable by j^u for any u
// coprime to m (change of generator of C_m).
uint64_t canonical_action_exponent(uint64_t j, uint64_t n, uint64_t m) {
  if (n == 1 || m == 1) return 1;
  uint64_t best = j % n;
  for (uint64_t u = 1; u < m; ++u) {
    if (std::gcd(u, m) != 1) continue;
    best = std::min(best, pow_mod(j, u, n));
  }
  return best;
}

// Keeps element indices comfortably inside uint32 arithmetic.
constexpr uint64_t kMaxConstructibleOrder = 1u << 20;

}  // namespace

bool is_squarefree(uint64_t v) {
  if (v == 0) return false;
  for (uint64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      v /= p;
      if (v % p == 0) return false;
    }
  }
  return true;
}

bool is_prime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t p = 2; p * p <= v; ++p)
    if (v % p == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t v) {
  std::vector<uint64_t> out;
  for (uint64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      out.push_back(p);
      while (v % p == 0) v /= p;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

std::vector<uint64_t> squarefree_orders_up_to(uint64_t bound) {
  std::vector<uint64_t> out;
  for (uint64_t v = 1; v <= bound; ++v)
    if (is_squarefree(v)) out.push_back(v);
  return out;
}

SquarefreeGroup SquarefreeGroup::make(uint64_t t, uint64_t n, uint64_t m,
                                      uint64_t j) {
  require(t >= 1 && n >= 1 && m >= 1, ErrorCode::BadAction,
          "t, n, m must be positive");
  require(std::gcd(t, n) == 1 && std::gcd(t, m) == 1 && std::gcd(n, m) == 1,
          ErrorCode::NotCoprime, "t, n, m must be pairwise coprime");
  const uint64_t order = t * n * m;
  require(is_squarefree(order), ErrorCode::NonSquarefree,
          "t*n*m must be squarefree");
  require(order <= kMaxConstructibleOrder, ErrorCode::TooLarge,
          "group order too large for element arithmetic");

  if (n == 1) {
    // C_n : C_m degenerates; trivial centre forces m = 1 as well.
    require(m == 1, ErrorCode::BadAction,
            "n = 1 requires m = 1 (abelian part belongs in t)");
    j = 1;
  } else {
    j %= n;
    require(j >= 1 && std::gcd(j, n) == 1, ErrorCode::BadAction,
            "j must be a unit mod n");
    require(mult_order_mod(j, n) == m, ErrorCode::BadAction,
            "multiplicative order of j mod n must equal m");
    require(std::gcd(j - 1, n) == 1, ErrorCode::BadAction,
            "gcd(j-1, n) must be 1 (fixed-point-free action)");
    j = canonical_action_exponent(j, n, m);
  }

  auto impl = std::make_shared<Impl>();
  impl->t = static_cast<uint32_t>(t);
  impl->n = static_cast<uint32_t>(n);
  impl->m = static_cast<uint32_t>(m);
  impl->j = static_cast<uint32_t>(j);
  impl->order = order;
  impl->jpow.resize(m);
  impl->jpow[0] = static_cast<uint32_t>(1 % n);
  for (uint64_t c = 1; c < m; ++c)
    impl->jpow[c] = static_cast<uint32_t>(mul_mod(impl->jpow[c - 1], j, n));

  SquarefreeGroup g;
  g.impl_ = std::move(impl);
  return g;
}

GroupElement SquarefreeGroup::z() const {
  return {impl_->t > 1 ? 1u : 0u, 0, 0};
}
GroupElement SquarefreeGroup::y() const {
  return {0, impl_->n > 1 ? 1u : 0u, 0};
}
GroupElement SquarefreeGroup::x() const {
  return {0, 0, impl_->m > 1 ? 1u : 0u};
}

GroupElement SquarefreeGroup::mul(const GroupElement& g,
                                  const GroupElement& h) const {
  const auto& im = *impl_;
  return {(g.a + h.a) % im.t,
          static_cast<uint32_t>((g.b + uint64_t(h.b) * im.jpow[g.c]) % im.n),
          (g.c + h.c) % im.m};
}

GroupElement SquarefreeGroup::inv(const GroupElement& g) const {
  const auto& im = *impl_;
  const uint32_t c = (im.m - g.c) % im.m;
  // j^{-c} = j^{(m-c) mod m} since j has multiplicative order m.
  const uint64_t jinv = im.jpow[c];
  return {(im.t - g.a) % im.t,
          static_cast<uint32_t>((uint64_t(im.n) - g.b) % im.n * jinv % im.n),
          c};
}

GroupElement SquarefreeGroup::conj(const GroupElement& g,
                                   const GroupElement& by) const {
  return mul(mul(inv(by), g), by);
}

GroupElement SquarefreeGroup::pow(GroupElement g, int64_t e) const {
  if (e < 0) {
    g = inv(g);
    e = -e;
  }
  GroupElement acc = identity();
  while (e) {
    if (e & 1) acc = mul(acc, g);
    g = mul(g, g);
    e >>= 1;
  }
  return acc;
}

uint64_t SquarefreeGroup::element_order(const GroupElement& g) const {
  const auto& im = *impl_;
  const uint64_t oz = im.t / std::gcd<uint64_t>(g.a, im.t);
  const uint64_t d = im.m / std::gcd<uint64_t>(g.c, im.m);
  // (y^b x^c)^d lands in <y> with exponent b * (1 + j^c + ... + j^{(d-1)c}).
  uint64_t sigma = 0, cur = 1 % im.n;
  const uint64_t jc = im.jpow[g.c];
  for (uint64_t i = 0; i < d; ++i) {
    sigma = (sigma + cur) % im.n;
    cur = cur * jc % im.n;
  }
  const uint64_t e = uint64_t(g.b) * sigma % im.n;
  const uint64_t oy = im.n / std::gcd<uint64_t>(e, im.n);
  return std::lcm(oz, d * oy);
}

bool SquarefreeGroup::commutes(const GroupElement& g,
                               const GroupElement& h) const {
  return mul(g, h) == mul(h, g);
}

std::string SquarefreeGroup::literal() const {
  std::ostringstream os;
  os << "sqfree:t=" << t() << ",n=" << n() << ",m=" << m() << ",j=" << j();
  return os.str();
}

std::string SquarefreeGroup::display_name() const {
  std::ostringstream os;
  if (is_abelian()) {
    os << "C" << order();
    return os.str();
  }
  std::string semi;
  {
    std::ostringstream ss;
    if (m() == 2 && j() == n() - 1)
      ss << "D" << 2 * n();
    else if (n() == 7 && m() == 3)
      ss << "F21";
    else
      ss << "C" << n() << ":C" << m();
    semi = ss.str();
  }
  if (t() == 1) return semi;
  os << "C" << t() << "x" << semi;
  return os.str();
}

SquarefreeGroup make_group(uint64_t t, uint64_t n, uint64_t m, uint64_t j) {
  return SquarefreeGroup::make(t, n, m, j);
}

std::vector<SquarefreeGroup> enumerate_groups(uint64_t order) {
  require(order >= 1, ErrorCode::BadAction, "order must be positive");
  require(is_squarefree(order), ErrorCode::NonSquarefree,
          "order must be squarefree");

  std::vector<SquarefreeGroup> out;
  std::vector<std::array<uint64_t, 4>> seen;
  for (uint64_t n = 1; n <= order; ++n) {
    if (order % n) continue;
    const uint64_t rest = order / n;
    for (uint64_t m = 1; m <= rest; ++m) {
      if (rest % m) continue;
      const uint64_t t = rest / m;
      if (n == 1) {
        if (m == 1) out.push_back(SquarefreeGroup::make(t, 1, 1, 1));
        continue;
      }
      if (m == 1) continue;  // nontrivial C_n with trivial action: no
      for (uint64_t j = 2; j < n; ++j) {
        if (std::gcd(j, n) != 1 || std::gcd(j - 1, n) != 1) continue;
        if (mult_order_mod(j, n) != m) continue;
        const uint64_t jc = canonical_action_exponent(j, n, m);
        std::array<uint64_t, 4> key{t, n, m, jc};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        out.push_back(SquarefreeGroup::make(t, n, m, jc));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SquarefreeGroup& a, const SquarefreeGroup& b) {
              return std::tuple(a.n(), a.m(), a.t(), a.j()) <
                     std::tuple(b.n(), b.m(), b.t(), b.j());
            });
  return out;
}

bool Subgroup::contains(uint32_t elt_index) const {
  return std::binary_search(elements.begin(), elements.end(), elt_index);
}

Subgroup subgroup_closure(const SquarefreeGroup& R,
                          const std::vector<GroupElement>& gens) {
  std::vector<char> in(R.size(), 0);
  std::vector<GroupElement> queue;
  in[R.index_of(R.identity())] = 1;
  queue.push_back(R.identity());
  for (size_t head = 0; head < queue.size(); ++head) {
    for (const GroupElement& g : gens) {
      GroupElement h = R.mul(queue[head], g);
      uint32_t idx = R.index_of(h);
      if (!in[idx]) {
        in[idx] = 1;
        queue.push_back(h);
      }
    }
  }
  Subgroup sub;
  sub.generators = gens;
  for (uint32_t i = 0; i < R.size(); ++i)
    if (in[i]) sub.elements.push_back(i);
  return sub;
}

bool is_normal_subgroup(const SquarefreeGroup& R, const Subgroup& K) {
  for (const GroupElement& g : K.generators)
    for (uint32_t i = 0; i < R.size(); ++i)
      if (!K.contains(R.index_of(R.conj(g, R.element_at(i))))) return false;
  return true;
}

namespace {

using GroupKey = std::array<uint64_t, 4>;

GroupKey key_of(const SquarefreeGroup& R) {
  return {R.t(), R.n(), R.m(), R.j()};
}

std::map<GroupKey, std::vector<Subgroup>> g_subgroup_cache;
std::mutex g_subgroup_mutex;

}  // namespace

const std::vector<Subgroup>& subgroups(const SquarefreeGroup& R) {
  require(R.order() <= kEngineBound, ErrorCode::TooLarge,
          "subgroup enumeration bounded to |R| <= 512");
  {
    std::lock_guard<std::mutex> lock(g_subgroup_mutex);
    auto it = g_subgroup_cache.find(key_of(R));
    if (it != g_subgroup_cache.end()) return it->second;
  }

  std::vector<Subgroup> subs;
  std::vector<std::vector<uint32_t>> seen;
  auto add = [&](Subgroup&& s) {
    if (std::find(seen.begin(), seen.end(), s.elements) != seen.end()) return;
    seen.push_back(s.elements);
    subs.push_back(std::move(s));
  };

  add(subgroup_closure(R, {}));
  const uint32_t nr = R.size();
  for (uint32_t i = 0; i < nr; ++i) {
    GroupElement gi = R.element_at(i);
    add(subgroup_closure(R, {gi}));
    for (uint32_t k = i + 1; k < nr; ++k)
      add(subgroup_closure(R, {gi, R.element_at(k)}));
  }
  std::sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.elements.size() != b.elements.size())
      return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  for (Subgroup& s : subs) {
    s.is_normal = is_normal_subgroup(R, s);
    s.is_characteristic = s.is_normal && is_characteristic(R, s);
  }

  std::lock_guard<std::mutex> lock(g_subgroup_mutex);
  auto [it, inserted] = g_subgroup_cache.emplace(key_of(R), std::move(subs));
  (void)inserted;
  return it->second;
}

Subgroup hall_subgroup(const SquarefreeGroup& R,
                       const std::vector<uint64_t>& primes) {
  uint64_t tp = 1, np = 1, mp = 1;
  for (uint64_t p : primes) {
    require(is_prime(p), ErrorCode::NotPrime, "Hall subgroup: not a prime");
    if (R.t() % p == 0) tp *= p;
    if (R.n() % p == 0) np *= p;
    if (R.m() % p == 0) mp *= p;
  }
  std::vector<GroupElement> gens;
  if (tp > 1) gens.push_back(R.pow(R.z(), static_cast<int64_t>(R.t() / tp)));
  if (np > 1) gens.push_back(R.pow(R.y(), static_cast<int64_t>(R.n() / np)));
  if (mp > 1) gens.push_back(R.pow(R.x(), static_cast<int64_t>(R.m() / mp)));
  Subgroup sub = subgroup_closure(R, gens);
  require(sub.order() == tp * np * mp, ErrorCode::Internal,
          "Hall subgroup closure has wrong order");
  sub.is_normal = is_normal_subgroup(R, sub);
  if (R.order() <= kEngineBound)
    sub.is_characteristic = sub.is_normal && is_characteristic(R, sub);
  return sub;
}

Subgroup centre(const SquarefreeGroup& R) {
  std::vector<GroupElement> central;
  for (uint32_t i = 0; i < R.size(); ++i) {
    GroupElement g = R.element_at(i);
    if (R.commutes(g, R.y()) && R.commutes(g, R.x()) && R.commutes(g, R.z()))
      central.push_back(g);
  }
  Subgroup sub = subgroup_closure(R, central);
  sub.is_normal = true;
  if (R.order() <= kEngineBound)
    sub.is_characteristic = is_characteristic(R, sub);
  return sub;
}

Subgroup centralizer(const SquarefreeGroup& R, const GroupElement& g) {
  std::vector<GroupElement> elts;
  for (uint32_t i = 0; i < R.size(); ++i)
    if (R.commutes(g, R.element_at(i))) elts.push_back(R.element_at(i));
  Subgroup sub = subgroup_closure(R, elts);
  sub.is_normal = is_normal_subgroup(R, sub);
  return sub;
}

namespace {

// Generator images of (z, y, x) in a candidate group given a raw
// multiplication table with identity at index 0; used to put quotients
// into canonical Hoelder form.
std::optional<std::vector<uint32_t>> table_iso_to(
    const SquarefreeGroup& cand, const std::vector<std::vector<uint32_t>>& table,
    const std::vector<uint32_t>& orders) {
  const uint32_t nq = static_cast<uint32_t>(table.size());
  if (nq != cand.order()) return std::nullopt;
  auto tpow = [&](uint32_t g, uint64_t e) {
    uint32_t acc = 0;
    for (uint64_t i = 0; i < e; ++i) acc = table[acc][g];
    return acc;
  };
  std::vector<uint32_t> zc, yc, xc;
  for (uint32_t i = 0; i < nq; ++i) {
    if (orders[i] == cand.t()) zc.push_back(i);
    if (orders[i] == cand.n()) yc.push_back(i);
    if (orders[i] == cand.m()) xc.push_back(i);
  }
  for (uint32_t zi : zc)
    for (uint32_t yi : yc) {
      if (table[zi][yi] != table[yi][zi]) continue;
      for (uint32_t xi : xc) {
        if (table[zi][xi] != table[xi][zi]) continue;
        if (table[xi][yi] != table[tpow(yi, cand.j())][xi]) continue;
        // Induce the map by BFS from the identity; conflicts mean the
        // relation images do not define a homomorphism.
        std::vector<uint32_t> to_cand(nq, UINT32_MAX);
        to_cand[0] = cand.index_of(cand.identity());
        std::vector<uint32_t> queue{0};
        const std::array<std::pair<uint32_t, GroupElement>, 3> gens{
            {{zi, cand.z()}, {yi, cand.y()}, {xi, cand.x()}}};
        bool ok = true;
        for (size_t h = 0; h < queue.size() && ok; ++h) {
          for (const auto& [gq, gc] : gens) {
            uint32_t w = table[queue[h]][gq];
            uint32_t wc = cand.index_of(
                cand.mul(cand.element_at(to_cand[queue[h]]), gc));
            if (to_cand[w] == UINT32_MAX) {
              to_cand[w] = wc;
              queue.push_back(w);
            } else if (to_cand[w] != wc) {
              ok = false;
              break;
            }
          }
        }
        if (ok && queue.size() == nq) return to_cand;
      }
    }
  return std::nullopt;
}

}  // namespace

QuotientResult quotient(const SquarefreeGroup& R, const Subgroup& K) {
  require(is_normal_subgroup(R, K), ErrorCode::NotNormal,
          "quotient requires a normal subgroup");
  const uint32_t nr = R.size();
  const uint32_t q = static_cast<uint32_t>(nr / K.order());

  // Cosets Kg labelled in discovery order; element 0 is the identity, so
  // the identity coset gets label 0.
  std::vector<uint32_t> coset_of(nr, UINT32_MAX);
  std::vector<uint32_t> coset_rep;
  for (uint32_t i = 0; i < nr; ++i) {
    if (coset_of[i] != UINT32_MAX) continue;
    uint32_t label = static_cast<uint32_t>(coset_rep.size());
    GroupElement g = R.element_at(i);
    for (uint32_t k : K.elements)
      coset_of[R.index_of(R.mul(R.element_at(k), g))] = label;
    coset_rep.push_back(i);
  }

  std::vector<std::vector<uint32_t>> table(q, std::vector<uint32_t>(q));
  for (uint32_t ci = 0; ci < q; ++ci)
    for (uint32_t ck = 0; ck < q; ++ck)
      table[ci][ck] = coset_of[R.index_of(
          R.mul(R.element_at(coset_rep[ci]), R.element_at(coset_rep[ck])))];
  std::vector<uint32_t> orders(q);
  for (uint32_t ci = 0; ci < q; ++ci) {
    uint32_t acc = table[0][ci], k = 1;
    while (acc != 0) {
      acc = table[acc][ci];
      ++k;
    }
    orders[ci] = k;
  }

  for (const SquarefreeGroup& cand : enumerate_groups(q)) {
    if (auto to_cand = table_iso_to(cand, table, orders)) {
      QuotientResult res{cand, std::vector<uint32_t>(nr)};
      for (uint32_t i = 0; i < nr; ++i)
        res.projection[i] = (*to_cand)[coset_of[i]];
      return res;
    }
  }
  fail(ErrorCode::Internal, "quotient has no squarefree normal form");
}

namespace {

uint64_t parse_u64(const std::string& s, size_t& pos) {
  size_t start = pos;
  uint64_t v = 0;
  while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + (s[pos] - '0');
    ++pos;
  }
  require(pos > start, ErrorCode::ParseError,
          "expected number at position " + std::to_string(start) + " in '" +
              s + "'");
  return v;
}

}  // namespace

SquarefreeGroup parse_group(const std::string& text) {
  if (text.rfind("sqfree:", 0) == 0) {
    uint64_t vals[4] = {0, 0, 0, 0};
    const char* names = "tnmj";
    size_t pos = 7;
    for (int i = 0; i < 4; ++i) {
      require(pos < text.size() && text[pos] == names[i], ErrorCode::ParseError,
              std::string("expected '") + names[i] + "=' at position " +
                  std::to_string(pos) + " in '" + text + "'");
      ++pos;
      require(pos < text.size() && text[pos] == '=', ErrorCode::ParseError,
              "expected '=' at position " + std::to_string(pos));
      ++pos;
      vals[i] = parse_u64(text, pos);
      if (i < 3) {
        require(pos < text.size() && text[pos] == ',', ErrorCode::ParseError,
                "expected ',' at position " + std::to_string(pos));
        ++pos;
      }
    }
    require(pos == text.size(), ErrorCode::ParseError,
            "trailing characters in group literal '" + text + "'");
    return SquarefreeGroup::make(vals[0], vals[1], vals[2], vals[3]);
  }
  if (text == "F21") return SquarefreeGroup::make(1, 7, 3, 2);
  if (!text.empty() && (text[0] == 'C' || text[0] == 'D')) {
    size_t pos = 1;
    uint64_t k = parse_u64(text, pos);
    require(pos == text.size(), ErrorCode::ParseError,
            "trailing characters in group name '" + text + "'");
    if (text[0] == 'C') return SquarefreeGroup::make(k, 1, 1, 1);
    require(k % 2 == 0 && k >= 6, ErrorCode::ParseError,
            "dihedral name needs even order >= 6");
    return SquarefreeGroup::make(1, k / 2, 2, k / 2 - 1);
  }
  fail(ErrorCode::ParseError, "unrecognized group literal '" + text + "'");
}

}  // namespace regrep
