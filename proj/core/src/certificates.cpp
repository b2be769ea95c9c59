#include "regrep/certificates.hpp"

namespace regrep {

using nlohmann::json;

json element_to_json(const GroupElement& e) {
  return json::array({e.a, e.b, e.c});
}

GroupElement element_from_json(const json& j) {
  require(j.is_array() && j.size() == 3, ErrorCode::ParseError,
          "element must be a [a,b,c] triple");
  return GroupElement{j[0].get<uint32_t>(), j[1].get<uint32_t>(),
                      j[2].get<uint32_t>()};
}

json wreath_to_json(const SquarefreeGroup& R, const WreathCertificate& cert) {
  json j;
  j["schema"] = kSchemaTag;
  j["type"] = "wreath";
  j["group"] = R.literal();
  json kg = json::array(), hg = json::array();
  for (const GroupElement& g : cert.K.generators) kg.push_back(element_to_json(g));
  for (const GroupElement& g : cert.H.generators) hg.push_back(element_to_json(g));
  j["K_generators"] = kg;
  j["H_generators"] = hg;
  j["K_order"] = cert.K.order();
  j["H_order"] = cert.H.order();
  j["left_checked"] = cert.left_checked;
  j["right_checked"] = cert.right_checked;
  j["degenerate"] = cert.degenerate;
  return j;
}

WreathCertificate wreath_from_json(const SquarefreeGroup& R, const json& j) {
  WreathCertificate cert;
  std::vector<GroupElement> kg, hg;
  for (const auto& e : j.at("K_generators")) kg.push_back(element_from_json(e));
  for (const auto& e : j.at("H_generators")) hg.push_back(element_from_json(e));
  cert.K = subgroup_closure(R, kg);
  cert.H = subgroup_closure(R, hg);
  require(cert.K.order() == j.at("K_order").get<uint64_t>() &&
              cert.H.order() == j.at("H_order").get<uint64_t>(),
          ErrorCode::ParseError, "wreath generator closure order mismatch");
  cert.left_checked = j.at("left_checked").get<bool>();
  cert.right_checked = j.at("right_checked").get<bool>();
  cert.degenerate = j.at("degenerate").get<bool>();
  return cert;
}

namespace {

json count_to_json(const Count128& c) {
  if (c.fits_u64() && c.as_u64() <= (uint64_t(1) << 53)) return c.as_u64();
  return c.to_string();
}

}  // namespace

json witness_to_json(const WitnessCertificate& w) {
  json j;
  j["schema"] = kSchemaTag;
  j["type"] = "witness";
  j["group"] = w.group.literal();
  j["group_name"] = w.group.display_name();
  j["kind"] = to_string(w.kind);
  json set = json::array();
  for (uint32_t idx : w.set.indices())
    set.push_back(element_to_json(w.group.element_at(idx)));
  j["set"] = set;
  j["stabilizer_sweep"] = {{"aut_group_order", w.stabilizer.aut_group_order},
                           {"trivial", w.stabilizer.trivial}};
  j["aut_order"] = count_to_json(w.cayley_aut_order);
  j["extra_automorphism"] = w.extra_automorphism.images();
  if (w.wreath) j["wreath"] = wreath_to_json(w.group, *w.wreath);
  return j;
}

WitnessCertificate witness_from_json(const json& j) {
  require(j.at("schema").get<std::string>() == kSchemaTag,
          ErrorCode::ParseError, "unknown certificate schema");
  require(j.at("type").get<std::string>() == "witness", ErrorCode::ParseError,
          "not a witness certificate");
  SquarefreeGroup R = parse_group(j.at("group").get<std::string>());
  std::vector<GroupElement> elts;
  for (const auto& e : j.at("set")) elts.push_back(element_from_json(e));
  WitnessCertificate w{
      R,
      ConnectionSet::from_elements(R, elts),
      j.at("kind").get<std::string>() == "graph" ? WitnessKind::graph
                                                 : WitnessKind::digraph,
      StabilizerProof{
          j.at("stabilizer_sweep").at("aut_group_order").get<uint64_t>(),
          j.at("stabilizer_sweep").at("trivial").get<bool>()},
      Count128{},
      Perm::from_images(
          j.at("extra_automorphism").get<std::vector<uint32_t>>()),
      std::nullopt};
  const json& order = j.at("aut_order");
  if (order.is_number_unsigned()) {
    w.cayley_aut_order = Count128::from_u64(order.get<uint64_t>());
  } else {
    // Decimal string; parse into the 128-bit counter.
    Count128 c;
    for (char ch : order.get<std::string>()) {
      require(ch >= '0' && ch <= '9', ErrorCode::ParseError,
              "bad aut_order string");
      c.mul(10);
      c.value += static_cast<unsigned>(ch - '0');
    }
    w.cayley_aut_order = c;
  }
  if (j.contains("wreath")) w.wreath = wreath_from_json(R, j.at("wreath"));
  return w;
}

json verdict_to_json(const SquarefreeGroup& R, const DetectionVerdict& v) {
  json j;
  j["group"] = R.literal();
  j["name"] = R.display_name();
  j["order"] = R.order();
  j["drr_detecting"] = v.drr_detecting;
  j["grr_detecting"] = v.grr_detecting;
  j["clause"] = clause_code(v.clause);
  j["reason"] = clause_reason(v.clause);
  return j;
}

std::string validate_certificate_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "witness") {
      WitnessCertificate w = witness_from_json(j);
      if (!verify_witness(w)) return "witness re-verification failed";
      return "";
    }
    if (type == "wreath") {
      SquarefreeGroup R = parse_group(j.at("group").get<std::string>());
      require(j.contains("set"), ErrorCode::ParseError,
              "standalone wreath certificate needs the connection set");
      std::vector<GroupElement> elts;
      for (const auto& e : j.at("set")) elts.push_back(element_from_json(e));
      ConnectionSet S = ConnectionSet::from_elements(R, elts);
      WreathCertificate cert = wreath_from_json(R, j);
      auto again = check_star_star(R, S, cert.K, cert.H);
      if (!again) return "wreath conditions no longer hold";
      return "";
    }
    return "unknown certificate type '" + type + "'";
  } catch (const std::exception& e) {
    return e.what();
  }
}

}  // namespace regrep
