#include "regrep/wreath.hpp"

#include <algorithm>

#include "regrep/group_aut.hpp"

namespace regrep {

namespace {

bool subgroup_subset(const Subgroup& A, const Subgroup& B) {
  return std::includes(B.elements.begin(), B.elements.end(),
                       A.elements.begin(), A.elements.end());
}

bool normal_in(const SquarefreeGroup& R, const Subgroup& K,
               const Subgroup& H) {
  for (uint32_t h : H.elements) {
    GroupElement eh = R.element_at(h);
    for (uint32_t k : K.elements)
      if (!K.contains(R.index_of(R.conj(R.element_at(k), eh)))) return false;
  }
  return true;
}

std::vector<uint32_t> set_minus_subgroup(const ConnectionSet& S,
                                         const Subgroup& H) {
  std::vector<uint32_t> out;
  for (uint32_t s : S.indices())
    if (!H.contains(s)) out.push_back(s);
  return out;
}

bool left_stable(const SquarefreeGroup& R, const ConnectionSet& S,
                 const Subgroup& K, const Subgroup& H,
                 const std::vector<uint32_t>& outside) {
  for (uint32_t s : outside) {
    GroupElement es = R.element_at(s);
    for (uint32_t k : K.elements) {
      uint32_t ks = R.index_of(R.mul(R.element_at(k), es));
      if (!S.contains(ks) || H.contains(ks)) return false;
    }
  }
  return true;
}

bool right_stable(const SquarefreeGroup& R, const ConnectionSet& S,
                  const Subgroup& K, const Subgroup& H,
                  const std::vector<uint32_t>& outside) {
  for (uint32_t s : outside) {
    GroupElement es = R.element_at(s);
    for (uint32_t k : K.elements) {
      uint32_t sk = R.index_of(R.mul(es, R.element_at(k)));
      if (!S.contains(sk) || H.contains(sk)) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<WreathCertificate> check_star_star(const SquarefreeGroup& R,
                                                 const ConnectionSet& S,
                                                 const Subgroup& K,
                                                 const Subgroup& H) {
  require(K.order() > 1, ErrorCode::BadChain, "K must be nontrivial");
  require(H.order() < R.order(), ErrorCode::BadChain, "H must be proper");
  require(subgroup_subset(K, H), ErrorCode::BadChain, "K must lie in H");
  require(normal_in(R, K, H), ErrorCode::BadChain, "K must be normal in H");

  WreathCertificate cert;
  cert.K = K;
  cert.H = H;
  const std::vector<uint32_t> outside = set_minus_subgroup(S, H);
  if (outside.empty()) {
    cert.degenerate = true;
    cert.left_checked = cert.right_checked = true;
    return cert;
  }
  // One-sided shortcut: with K normal in R or S inverse-closed, the two
  // conditions are equivalent.
  const bool shortcut = S.inverse_closed() || is_normal_subgroup(R, K);
  if (!left_stable(R, S, K, H, outside)) return std::nullopt;
  cert.left_checked = true;
  if (shortcut) {
    cert.right_checked = true;
    return cert;
  }
  if (!right_stable(R, S, K, H, outside)) return std::nullopt;
  cert.right_checked = true;
  return cert;
}

std::optional<WreathCertificate> find_gen_wreath(const SquarefreeGroup& R,
                                                 const ConnectionSet& S) {
  require(R.order() <= kEngineBound, ErrorCode::TooLarge,
          "wreath pair scan bounded to |R| <= 512");
  const auto& subs = subgroups(R);
  // Scan order is fixed: subgroups come sorted by (order, element list),
  // H outer ascending, K inner ascending.
  for (const Subgroup& H : subs) {
    if (H.order() <= 1 || H.order() >= R.order()) continue;
    for (const Subgroup& K : subs) {
      if (K.order() <= 1 || K.order() > H.order()) continue;
      if (!subgroup_subset(K, H)) continue;
      if (!normal_in(R, K, H)) continue;
      auto cert = check_star_star(R, S, K, H);
      if (cert) return cert;
    }
  }
  return std::nullopt;
}

Perm alpha_k(const CayleyDigraph& g, const WreathCertificate& cert,
             const GroupElement& k) {
  const SquarefreeGroup& R = g.group();
  const uint32_t ki = R.index_of(k);
  require(ki != 0 && cert.K.contains(ki), ErrorCode::NotInK,
          "alpha_k requires a nontrivial element of K");

  std::vector<uint32_t> img(R.size());
  for (uint32_t v = 0; v < R.size(); ++v)
    img[v] = cert.H.contains(v) ? R.index_of(R.mul(R.element_at(v), k)) : v;
  Perm alpha = Perm::from_images(std::move(img));

  for (uint32_t v = 0; v < R.size(); ++v)
    for (uint32_t w : g.out_neighbors(v))
      require(g.has_arc(alpha[v], alpha[w]), ErrorCode::Internal,
              "alpha_k is not an automorphism (invalid certificate?)");
  require(!in_regular_image(R, alpha), ErrorCode::Internal,
          "alpha_k landed in the regular image");
  return alpha;
}

bool char_h_blocks(const SquarefreeGroup& R, const ConnectionSet& S,
                   const Subgroup& K, const Subgroup& H) {
  require(K.order() > 1 && K.order() < H.order() && H.order() < R.order(),
          ErrorCode::HypothesisViolated, "need 1 < K < H < R");
  require(subgroup_subset(K, H), ErrorCode::HypothesisViolated,
          "K must lie in H");
  require(is_characteristic(R, K), ErrorCode::HypothesisViolated,
          "K must be characteristic in R");
  // In squarefree groups maximal subgroups are exactly those of prime
  // index.
  require(is_prime(H.order() / K.order()), ErrorCode::HypothesisViolated,
          "K must be maximal in H");

  const auto outside_h = set_minus_subgroup(S, H);
  const bool hyp3 = left_stable(R, S, K, H, outside_h);
  const auto outside_k = set_minus_subgroup(S, K);
  const bool hyp4 = !left_stable(R, S, K, K, outside_k);
  if (!(hyp3 && hyp4)) return false;

  // Conclusion, verified directly: the set stabilizer normalises H.
  for (const GroupAutomorphism& phi : set_stabilizer(R, S).stabilizer)
    for (uint32_t e : H.elements)
      require(H.contains(phi.action[e]), ErrorCode::Internal,
              "set stabilizer does not normalise H despite hypotheses");
  return true;
}

std::optional<WreathCertificate> gen_wreath_from_stabilizer(
    const SquarefreeGroup& R, const ConnectionSet& S, const PermGroup& G,
    const Subgroup& K, const Subgroup& H) {
  require(K.order() > 1, ErrorCode::BadChain, "K must be nontrivial");
  require(H.order() < R.order(), ErrorCode::BadChain, "H must be proper");
  require(subgroup_subset(K, H), ErrorCode::BadChain, "K must lie in H");
  require(normal_in(R, K, H), ErrorCode::BadChain, "K must be normal in H");

  CayleyDigraph g(R, S);
  require(G.degree() == R.size(), ErrorCode::NotAutSubgroup,
          "G degree mismatch");
  for (const Perm& p : G.generators())
    for (uint32_t v = 0; v < R.size(); ++v)
      for (uint32_t w : g.out_neighbors(v))
        require(g.has_arc(p[v], p[w]), ErrorCode::NotAutSubgroup,
                "G is not a subgroup of Aut(Cay(R,S))");

  PermGroup G1 = G.point_stabilizer(0);
  G1.freeze();
  require(!G1.order().greater_than_u64(100'000), ErrorCode::TooLarge,
          "vertex stabilizer too large for coset checks");

  // H must normalise G_1.
  for (uint32_t h : H.elements) {
    Perm hp = right_translation(R, R.element_at(h));
    for (const Perm& s : G1.generators())
      if (!G1.contains(s.conjugated_by(hp)))
        fail(ErrorCode::HypothesisNotMet, "H does not normalise G_1");
  }

  // For r outside H: G_1 K and (unless S = S^-1) G_1 K^r inside
  // G_1 G_1^r; equivalently every k-hat (k^r-hat) lies in G_1 G_1^r.
  std::vector<Perm> g1_elements = G1.elements(100'000);
  auto in_g1g1r = [&](const Perm& cand, const Perm& rho) {
    const Perm rho_inv = rho.inverse();
    for (const Perm& g1 : g1_elements) {
      Perm rest = g1.inverse() * cand;
      if (G1.contains(rho * rest * rho_inv)) return true;
    }
    return false;
  };
  for (uint32_t v = 0; v < R.size(); ++v) {
    if (H.contains(v)) continue;
    Perm rho = right_translation(R, R.element_at(v));
    for (uint32_t kidx : K.elements) {
      if (kidx == 0) continue;
      Perm khat = right_translation(R, R.element_at(kidx));
      if (!in_g1g1r(khat, rho))
        fail(ErrorCode::HypothesisNotMet, "G_1 K not inside G_1 G_1^r");
      if (!S.inverse_closed() && !in_g1g1r(khat.conjugated_by(rho), rho))
        fail(ErrorCode::HypothesisNotMet, "G_1 K^r not inside G_1 G_1^r");
    }
  }

  auto cert = check_star_star(R, S, K, H);
  require(cert.has_value(), ErrorCode::Internal,
          "coset hypotheses passed but the wreath conditions fail");
  return cert;
}

}  // namespace regrep
