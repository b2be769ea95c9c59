#include "regrep/group_aut.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>

namespace regrep {

GroupAutomorphism make_automorphism(const SquarefreeGroup& R,
                                    const GroupElement& z_image,
                                    const GroupElement& y_image,
                                    const GroupElement& x_image) {
  // Relations of the presentation; orders are forced by bijectivity.
  require(R.commutes(z_image, y_image) && R.commutes(z_image, x_image),
          ErrorCode::BadAction, "generator images do not commute with z");
  require(R.mul(x_image, y_image) ==
              R.mul(R.pow(y_image, static_cast<int64_t>(R.j())), x_image),
          ErrorCode::BadAction, "generator images violate the action relation");

  const uint32_t t = static_cast<uint32_t>(R.t());
  const uint32_t n = static_cast<uint32_t>(R.n());
  const uint32_t m = static_cast<uint32_t>(R.m());
  std::vector<GroupElement> zp(t), yp(n), xp(m);
  zp[0] = R.identity();
  for (uint32_t a = 1; a < t; ++a) zp[a] = R.mul(zp[a - 1], z_image);
  yp[0] = R.identity();
  for (uint32_t b = 1; b < n; ++b) yp[b] = R.mul(yp[b - 1], y_image);
  xp[0] = R.identity();
  for (uint32_t c = 1; c < m; ++c) xp[c] = R.mul(xp[c - 1], x_image);

  std::vector<uint32_t> img(R.size());
  std::vector<char> seen(R.size(), 0);
  for (uint32_t v = 0; v < R.size(); ++v) {
    GroupElement e = R.element_at(v);
    uint32_t w = R.index_of(R.mul(R.mul(zp[e.a], yp[e.b]), xp[e.c]));
    require(!seen[w], ErrorCode::BadAction,
            "generator images do not induce a bijection");
    seen[w] = 1;
    img[v] = w;
  }
  return GroupAutomorphism{z_image, y_image, x_image,
                           Perm::from_images(std::move(img))};
}

GroupAutomorphism inner_automorphism(const SquarefreeGroup& R,
                                     const GroupElement& k) {
  return make_automorphism(R, R.conj(R.z(), k), R.conj(R.y(), k),
                           R.conj(R.x(), k));
}

GroupAutomorphism compose(const SquarefreeGroup& R,
                          const GroupAutomorphism& first,
                          const GroupAutomorphism& second) {
  return make_automorphism(R, second.apply(R, first.z_image),
                           second.apply(R, first.y_image),
                           second.apply(R, first.x_image));
}

GroupAutomorphism invert(const SquarefreeGroup& R,
                         const GroupAutomorphism& phi) {
  Perm inv = phi.action.inverse();
  return make_automorphism(R, R.element_at(inv[R.index_of(R.z())]),
                           R.element_at(inv[R.index_of(R.y())]),
                           R.element_at(inv[R.index_of(R.x())]));
}

namespace {

using GroupKey = std::array<uint64_t, 4>;

GroupKey key_of(const SquarefreeGroup& R) {
  return {R.t(), R.n(), R.m(), R.j()};
}

std::map<GroupKey, std::vector<GroupAutomorphism>> g_aut_cache;
std::mutex g_aut_mutex;

}  // namespace

const std::vector<GroupAutomorphism>& automorphism_group(
    const SquarefreeGroup& R) {
  require(R.order() <= kEngineBound, ErrorCode::TooLarge,
          "automorphism enumeration bounded to |R| <= 512");
  {
    std::lock_guard<std::mutex> lock(g_aut_mutex);
    auto it = g_aut_cache.find(key_of(R));
    if (it != g_aut_cache.end()) return it->second;
  }

  std::vector<GroupElement> zs, ys, xs;
  for (uint32_t v = 0; v < R.size(); ++v) {
    GroupElement e = R.element_at(v);
    const uint64_t ord = R.element_order(e);
    if (ord == R.t()) zs.push_back(e);
    if (ord == R.n()) ys.push_back(e);
    if (ord == R.m()) xs.push_back(e);
  }

  std::vector<GroupAutomorphism> auts;
  const int64_t j = static_cast<int64_t>(R.j());
  for (const GroupElement& zi : zs)
    for (const GroupElement& yi : ys) {
      if (!R.commutes(zi, yi)) continue;
      const GroupElement yij = R.pow(yi, j);
      for (const GroupElement& xi : xs) {
        if (!R.commutes(zi, xi)) continue;
        if (!(R.mul(xi, yi) == R.mul(yij, xi))) continue;
        try {
          auts.push_back(make_automorphism(R, zi, yi, xi));
        } catch (const Error&) {
          // relation-passing images that fail bijectivity
        }
      }
    }

  std::lock_guard<std::mutex> lock(g_aut_mutex);
  auto [it, inserted] = g_aut_cache.emplace(key_of(R), std::move(auts));
  (void)inserted;
  return it->second;
}

AutStabReport set_stabilizer(const SquarefreeGroup& R,
                             const ConnectionSet& S) {
  require(!S.contains(0), ErrorCode::IdentityInS,
          "set stabilizer: identity in S");
  const auto& auts = automorphism_group(R);
  AutStabReport report;
  report.aut_order = auts.size();
  for (const GroupAutomorphism& phi : auts) {
    bool fixes = true;
    for (uint32_t s : S.indices())
      if (!S.contains(phi.action[s])) {
        fixes = false;
        break;
      }
    if (fixes) report.stabilizer.push_back(phi);
  }
  report.trivial = report.stabilizer.size() == 1;
  return report;
}

bool is_characteristic(const SquarefreeGroup& R, const Subgroup& K) {
  for (const GroupAutomorphism& phi : automorphism_group(R))
    for (uint32_t e : K.elements)
      if (!K.contains(phi.action[e])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constructed automorphisms

GroupAutomorphism dihedral_beta(const SquarefreeGroup& D,
                                const ConnectionSet& S) {
  const uint64_t r = D.n();
  require(D.t() == 1 && D.m() == 2 && D.j() == r - 1 && (r == 3 || r == 5),
          ErrorCode::WrongShape, "dihedral_beta requires D6 or D10");
  require(S.inverse_closed(), ErrorCode::NotInverseClosed,
          "dihedral_beta requires S = S^-1");

  // Reflections in S, by rotation exponent. Conjugation by the
  // reflection with exponent s maps exponent b to 2s - b, so preserving
  // the trace of S on the reflections is the only constraint; working
  // with the smaller of the trace and its complement leaves at most two
  // exponents to hit.
  std::vector<uint64_t> trace;
  for (uint32_t idx : S.indices()) {
    GroupElement e = D.element_at(idx);
    if (e.c == 1) trace.push_back(e.b);
  }
  if (2 * trace.size() > r) {
    std::vector<uint64_t> complement;
    for (uint64_t b = 0; b < r; ++b)
      if (std::find(trace.begin(), trace.end(), b) == trace.end())
        complement.push_back(b);
    trace = std::move(complement);
  }
  const uint64_t inv2 = (r + 1) / 2;
  uint64_t s = 0;
  if (trace.size() == 1)
    s = trace[0];
  else if (trace.size() == 2)
    s = (trace[0] + trace[1]) % r * inv2 % r;

  GroupElement w{0, static_cast<uint32_t>(s), 1};
  GroupAutomorphism beta = inner_automorphism(D, w);
  require(!beta.is_identity(), ErrorCode::Internal,
          "dihedral_beta produced the identity");
  require(beta.apply(D, D.y()) == D.inv(D.y()), ErrorCode::Internal,
          "dihedral_beta does not invert the rotation subgroup");
  for (uint32_t idx : S.indices())
    require(S.contains(beta.action[idx]), ErrorCode::Internal,
            "dihedral_beta does not stabilize S");
  return beta;
}

namespace {

Subgroup centre_of_subgroup(const SquarefreeGroup& R, const Subgroup& H) {
  std::vector<uint32_t> central;
  for (uint32_t a : H.elements) {
    bool ok = true;
    for (uint32_t b : H.elements)
      if (!R.commutes(R.element_at(a), R.element_at(b))) {
        ok = false;
        break;
      }
    if (ok) central.push_back(a);
  }
  Subgroup z;
  z.elements = std::move(central);
  return z;
}

bool stabilizes(const SquarefreeGroup&, const GroupAutomorphism& phi,
                const ConnectionSet& S) {
  for (uint32_t s : S.indices())
    if (!S.contains(phi.action[s])) return false;
  return true;
}

}  // namespace

GroupAutomorphism conjugation_witness(const SquarefreeGroup& R,
                                      const WreathCertificate& cert,
                                      const ConnectionSet& S) {
  Subgroup zr = centre(R);
  Subgroup zh = centre_of_subgroup(R, cert.H);
  uint32_t pick = UINT32_MAX;
  for (uint32_t e : zh.elements)
    if (cert.K.contains(e) && !zr.contains(e)) {
      pick = e;
      break;
    }
  require(pick != UINT32_MAX, ErrorCode::HypothesisFailed,
          "Z(H) n K lies in Z(R)");
  GroupAutomorphism alpha = inner_automorphism(R, R.element_at(pick));
  require(!alpha.is_identity(), ErrorCode::Internal,
          "conjugation witness is trivial");
  require(stabilizes(R, alpha, S), ErrorCode::HypothesisFailed,
          "conjugation witness does not stabilize S (invalid certificate?)");
  return alpha;
}

namespace {

// Applies an automorphism to a subgroup / connection set.
Subgroup map_subgroup(const SquarefreeGroup& R, const Subgroup& K,
                      const GroupAutomorphism& phi) {
  Subgroup out;
  for (const GroupElement& g : K.generators)
    out.generators.push_back(phi.apply(R, g));
  out.elements.reserve(K.elements.size());
  for (uint32_t e : K.elements) out.elements.push_back(phi.action[e]);
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

ConnectionSet map_set(const SquarefreeGroup& R, const ConnectionSet& S,
                      const GroupAutomorphism& phi) {
  std::vector<uint32_t> idx;
  idx.reserve(S.size());
  for (uint32_t s : S.indices()) idx.push_back(phi.action[s]);
  return ConnectionSet::from_indices(R, std::move(idx));
}

bool subgroup_subset(const Subgroup& A, const Subgroup& B) {
  return std::includes(B.elements.begin(), B.elements.end(),
                       A.elements.begin(), A.elements.end());
}

bool star_star_holds(const SquarefreeGroup& R, const ConnectionSet& S,
                     const Subgroup& K, const Subgroup& H) {
  // Both-sided check, no shortcut; used as a hard assertion here.
  for (uint32_t s : S.indices()) {
    if (H.contains(s)) continue;
    GroupElement es = R.element_at(s);
    for (uint32_t k : K.elements) {
      GroupElement ek = R.element_at(k);
      uint32_t ks = R.index_of(R.mul(ek, es));
      uint32_t sk = R.index_of(R.mul(es, ek));
      if (!S.contains(ks) || H.contains(ks)) return false;
      if (!S.contains(sk) || H.contains(sk)) return false;
    }
  }
  return true;
}

}  // namespace

GroupAutomorphism qdr_wreath_witness(const SquarefreeGroup& R,
                                     const WreathCertificate& cert,
                                     const ConnectionSet& S) {
  const uint64_t q = R.t(), r = R.n();
  require(is_prime(q) && q % 2 == 1 && (r == 3 || r == 5) && q != r &&
              R.m() == 2 && R.j() == r - 1,
          ErrorCode::WrongShape, "qdr_wreath_witness requires C_q x D_2r");
  require(S.inverse_closed(), ErrorCode::NotInverseClosed,
          "qdr_wreath_witness requires S = S^-1");
  require(is_prime(cert.K.order()), ErrorCode::WrongShape,
          "qdr_wreath_witness requires |K| prime");
  require(star_star_holds(R, S, cert.K, cert.H), ErrorCode::HypothesisFailed,
          "certificate does not satisfy the wreath conditions");

  const uint64_t inv2 = (r + 1) / 2;

  // Conjugate K to <x>, <y> or <z>. A second conjugation may be needed
  // to bring H inside <x, z> when K = <z>.
  GroupElement conj_elt = R.identity();
  auto reflect_exponent = [&](const Subgroup& sub) -> int64_t {
    for (uint32_t e : sub.elements) {
      GroupElement g = R.element_at(e);
      if (g.c == 1) return g.b;
    }
    return -1;
  };
  if (cert.K.order() == 2) {
    int64_t b = reflect_exponent(cert.K);
    require(b >= 0, ErrorCode::Internal, "order-2 subgroup with no reflection");
    conj_elt = R.pow(R.y(), static_cast<int64_t>(uint64_t(b) * inv2 % r));
  }
  GroupAutomorphism iota = inner_automorphism(R, conj_elt);
  Subgroup K1 = map_subgroup(R, cert.K, iota);
  Subgroup H1 = map_subgroup(R, cert.H, iota);
  if (cert.K.order() == q) {
    // K = <z> already; align any reflection inside H to x.
    int64_t b = reflect_exponent(H1);
    if (b > 0) {
      GroupElement extra =
          R.pow(R.y(), static_cast<int64_t>(uint64_t(b) * inv2 % r));
      GroupAutomorphism iota2 = inner_automorphism(R, extra);
      iota = compose(R, iota, iota2);
      K1 = map_subgroup(R, cert.K, iota);
      H1 = map_subgroup(R, cert.H, iota);
    }
  }
  ConnectionSet S1 = map_set(R, S, iota);

  // Reference subgroups in normalized coordinates.
  Subgroup sub_y = subgroup_closure(R, {R.y()});
  Subgroup sub_z = subgroup_closure(R, {R.z()});
  Subgroup sub_x = subgroup_closure(R, {R.x()});
  Subgroup dihedral_part = subgroup_closure(R, {R.y(), R.x()});  // a = 0
  Subgroup cyclic_part = subgroup_closure(R, {R.y(), R.z()});    // c = 0
  Subgroup xz_part = subgroup_closure(R, {R.x(), R.z()});

  int matched_case = 0;
  Subgroup enlarged;
  if (K1.elements == sub_y.elements && subgroup_subset(H1, dihedral_part)) {
    matched_case = 1;
    enlarged = dihedral_part;
  } else if (K1.elements == sub_y.elements &&
             subgroup_subset(H1, cyclic_part)) {
    matched_case = 2;
    enlarged = cyclic_part;
  } else if (K1.elements == sub_z.elements &&
             subgroup_subset(H1, cyclic_part)) {
    matched_case = 3;
    enlarged = cyclic_part;
  } else if (K1.elements == sub_z.elements && subgroup_subset(H1, xz_part)) {
    matched_case = 4;
    enlarged = xz_part;
  } else if (K1.elements == sub_x.elements && subgroup_subset(H1, xz_part)) {
    matched_case = 5;
    enlarged = xz_part;
  }
  require(matched_case != 0, ErrorCode::NoCaseMatched,
          "normalized (K, H) fits none of the five shapes");
  require(star_star_holds(R, S1, K1, enlarged), ErrorCode::Internal,
          "enlarging H broke the wreath conditions");

  WreathCertificate norm_cert;
  norm_cert.K = K1;
  norm_cert.H = enlarged;
  norm_cert.left_checked = norm_cert.right_checked = true;

  GroupAutomorphism alpha1;
  const SquarefreeGroup D = SquarefreeGroup::make(1, r, 2, r - 1);
  switch (matched_case) {
    case 1: {
      // Extend a reflection-conjugation of the dihedral factor by the
      // identity on z.
      std::vector<uint32_t> trace_idx;
      for (uint32_t s : S1.indices()) {
        GroupElement e = R.element_at(s);
        if (e.a == 0)
          trace_idx.push_back(D.index_of(GroupElement{0, e.b, e.c}));
      }
      GroupAutomorphism beta =
          dihedral_beta(D, ConnectionSet::from_indices(D, trace_idx));
      auto lift = [&](const GroupElement& e) {
        return GroupElement{0, e.b, e.c};
      };
      alpha1 = make_automorphism(R, R.z(), lift(beta.y_image),
                                 lift(beta.x_image));
      break;
    }
    case 2:
    case 5:
      alpha1 = conjugation_witness(R, norm_cert, S1);
      break;
    case 3: {
      // Push S through the projection that forgets the z-coordinate,
      // find the quotient reflection-conjugation, and lift it with
      // z inverted.
      std::vector<uint32_t> proj_idx;
      for (uint32_t s : S1.indices()) {
        GroupElement e = R.element_at(s);
        if (e.b != 0 || e.c != 0)
          proj_idx.push_back(D.index_of(GroupElement{0, e.b, e.c}));
      }
      GroupAutomorphism beta =
          dihedral_beta(D, ConnectionSet::from_indices(D, proj_idx));
      const uint64_t two_s = beta.x_image.b;  // beta(x) = y^{2s} x
      alpha1 = make_automorphism(
          R, R.inv(R.z()), R.inv(R.y()),
          R.mul(R.x(), R.pow(R.y(), static_cast<int64_t>(two_s))));
      break;
    }
    case 4:
      alpha1 = make_automorphism(R, R.inv(R.z()), R.y(), R.x());
      break;
  }

  require(!alpha1.is_identity(), ErrorCode::Internal,
          "case construction produced the identity");
  require(stabilizes(R, alpha1, S1), ErrorCode::Internal,
          "case construction does not stabilize the normalized set");

  // Pull back through the conjugation.
  GroupAutomorphism alpha =
      compose(R, compose(R, iota, alpha1), invert(R, iota));
  require(!alpha.is_identity() && stabilizes(R, alpha, S),
          ErrorCode::Internal, "conjugating back broke the witness");
  return alpha;
}

}  // namespace regrep
