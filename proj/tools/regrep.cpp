// Command-line surface for the detection toolkit: group enumeration, the
// classifier, single-set checks, witness searches, and the verify-paper
// reproducibility harness.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "regrep/cayley.hpp"
#include "regrep/certificates.hpp"
#include "regrep/classify.hpp"
#include "regrep/group_aut.hpp"
#include "regrep/paper_suites.hpp"
#include "regrep/parallel.hpp"
#include "regrep/witness.hpp"
#include "regrep/wreath.hpp"

using nlohmann::json;
using namespace regrep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

GroupElement parse_triple(const SquarefreeGroup& R, const std::string& item) {
  auto parts = split(item, ',');
  require(parts.size() == 3, ErrorCode::ParseError,
          "expected 'a,b,c' in '" + item + "'");
  GroupElement e{static_cast<uint32_t>(std::stoul(parts[0])),
                 static_cast<uint32_t>(std::stoul(parts[1])),
                 static_cast<uint32_t>(std::stoul(parts[2]))};
  require(e.a < R.t() && e.b < R.n() && e.c < R.m(), ErrorCode::ParseError,
          "element '" + item + "' out of range for " + R.literal());
  return e;
}

// Connection set syntax: semicolon-separated items.
//   a,b,c              one element (canonical word z^a y^b x^c)
//   sym:a,b,c          the element and its inverse
//   refl:all           every element of order 2
//   coset:a,b,c*d,e,f  the left coset <(a,b,c)> * (d,e,f)
ConnectionSet parse_connection_set(const SquarefreeGroup& R,
                                   const std::string& text) {
  std::vector<uint32_t> idx;
  if (!text.empty()) {
    for (const std::string& item : split(text, ';')) {
      if (item.empty()) continue;
      if (item == "refl:all") {
        for (uint32_t e = 1; e < R.size(); ++e)
          if (R.element_order(R.element_at(e)) == 2) idx.push_back(e);
      } else if (item.rfind("sym:", 0) == 0) {
        GroupElement e = parse_triple(R, item.substr(4));
        idx.push_back(R.index_of(e));
        idx.push_back(R.index_of(R.inv(e)));
      } else if (item.rfind("coset:", 0) == 0) {
        auto parts = split(item.substr(6), '*');
        require(parts.size() == 2, ErrorCode::ParseError,
                "expected 'coset:k*g' in '" + item + "'");
        GroupElement k = parse_triple(R, parts[0]);
        GroupElement g = parse_triple(R, parts[1]);
        Subgroup K = subgroup_closure(R, {k});
        for (uint32_t e : K.elements)
          idx.push_back(R.index_of(R.mul(R.element_at(e), g)));
      } else {
        idx.push_back(R.index_of(parse_triple(R, item)));
      }
    }
  }
  return ConnectionSet::from_indices(R, std::move(idx));
}

struct Output {
  bool as_json = false;
  json body;

  void kv(const std::string& key, const json& value) { body[key] = value; }
  void text_line(const std::string& line) {
    if (!as_json) std::cout << line << "\n";
  }
  void flush(const std::string& command) {
    if (as_json) {
      json report;
      report["schema"] = kSchemaTag;
      report["command"] = command;
      report.update(body);
      std::cout << report.dump(2) << "\n";
    }
  }
};

int cmd_enumerate(uint64_t order, Output& out) {
  auto groups = enumerate_groups(order);
  json rows = json::array();
  for (const SquarefreeGroup& R : groups) {
    json row;
    row["group"] = R.literal();
    row["name"] = R.display_name();
    row["abelian"] = R.is_abelian();
    rows.push_back(row);
    out.text_line(R.literal() + "  " + R.display_name() +
                  (R.is_abelian() ? "  (abelian)" : ""));
  }
  out.kv("order", order);
  out.kv("count", groups.size());
  out.kv("groups", rows);
  out.text_line(std::to_string(groups.size()) + " isomorphism class(es)");
  return kExitOk;
}

int cmd_classify(const std::vector<SquarefreeGroup>& groups, Output& out) {
  json rows = json::array();
  for (const SquarefreeGroup& R : groups) {
    DetectionVerdict v = classify(R);
    rows.push_back(verdict_to_json(R, v));
    std::ostringstream line;
    line << std::left << std::setw(24) << R.literal() << std::setw(10)
         << R.display_name() << " DRR-detecting: " << (v.drr_detecting ? "yes" : "no ")
         << "  GRR-detecting: " << (v.grr_detecting ? "yes" : "no ")
         << "  clause " << clause_code(v.clause) << "  (" << clause_reason(v.clause)
         << ")";
    out.text_line(line.str());
  }
  out.kv("rows", rows);
  return kExitOk;
}

int cmd_check(const std::string& group_lit, const std::string& set_text,
              bool drr, bool grr, bool wreath, bool normaliser, bool dot,
              Output& out) {
  SquarefreeGroup R = parse_group(group_lit);
  ConnectionSet S = parse_connection_set(R, set_text);
  out.kv("group", R.literal());
  json set = json::array();
  for (uint32_t e : S.indices()) set.push_back(element_to_json(R.element_at(e)));
  out.kv("set", set);
  out.kv("inverse_closed", S.inverse_closed());

  if (dot) {
    CayleyDigraph g(R, S);
    std::cout << g.to_dot();
    return kExitOk;
  }

  if (drr || grr) {
    const bool result = grr ? is_grr(R, S) : is_drr(R, S);
    CayleyDigraph g(R, S);
    PermGroup aut = graph_automorphisms(g);
    AutStabReport stab = set_stabilizer(R, S);
    out.kv(grr ? "is_grr" : "is_drr", result);
    out.kv("aut_order", aut.order().to_string());
    out.kv("set_stabilizer_trivial", stab.trivial);
    out.text_line(std::string(grr ? "is_grr" : "is_drr") + " = " +
                  (result ? "true" : "false") + "  (|Aut| = " +
                  aut.order().to_string() + ", Aut(R)_S " +
                  (stab.trivial ? "trivial" : "nontrivial") + ")");
  }
  if (wreath) {
    auto cert = find_gen_wreath(R, S);
    out.kv("wreath_found", cert.has_value());
    if (cert) {
      out.body["wreath"] = wreath_to_json(R, *cert);
      out.text_line("generalised wreath product: |K| = " +
                    std::to_string(cert->K.order()) + ", |H| = " +
                    std::to_string(cert->H.order()) +
                    (cert->degenerate ? " (degenerate: S inside H)" : ""));
    } else {
      out.text_line("no (K, H) pair satisfies the wreath conditions");
    }
  }
  if (normaliser) {
    NormaliserIdentityReport rep = normaliser_identity_check(R, S);
    out.kv("aut_order", rep.aut_order.to_string());
    out.kv("normaliser_order", rep.lhs_order);
    out.kv("semidirect_order", rep.rhs_order);
    out.kv("equal", rep.equal);
    out.text_line("N_Aut(R-hat): order " + std::to_string(rep.lhs_order) +
                  ", R-hat x| Aut(R)_S: order " + std::to_string(rep.rhs_order) +
                  (rep.equal ? "  (equal as element sets)" : "  MISMATCH"));
    if (!rep.equal) return kExitError;
  }
  return kExitOk;
}

int cmd_check_certificate(const std::string& path, Output& out) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open " + path);
  json j = json::parse(in);
  std::string error = validate_certificate_json(j);
  out.kv("certificate", path);
  out.kv("valid", error.empty());
  if (!error.empty()) out.kv("error", error);
  out.text_line(error.empty() ? "certificate re-validates"
                              : "certificate INVALID: " + error);
  return error.empty() ? kExitOk : kExitError;
}

int cmd_witness(const std::string& group_lit, const std::string& kind_text,
                const std::string& strategy_text, uint64_t budget,
                uint64_t seed, const std::string& out_path, Output& out) {
  SquarefreeGroup R = parse_group(group_lit);
  WitnessKind kind =
      kind_text == "graph" ? WitnessKind::graph : WitnessKind::digraph;
  SearchStrategy strategy = SearchStrategy::exhaustive_orbit_reduced;
  if (strategy_text == "structured") strategy = SearchStrategy::structured_first;
  else if (strategy_text == "randomized") strategy = SearchStrategy::randomized;
  else require(strategy_text == "exhaustive", ErrorCode::ParseError,
               "strategy must be exhaustive|structured|randomized");

  SearchOutcome res = search_witness(R, kind, strategy, budget, seed);
  out.kv("group", R.literal());
  out.kv("kind", to_string(kind));
  out.kv("strategy", res.strategy_used);
  out.kv("status", to_string(res.status));
  out.kv("stats", {{"subsets", res.stats.subsets_total},
                   {"orbit_reps", res.stats.orbit_reps},
                   {"trivial_stabilizer_reps",
                    res.stats.trivial_stabilizer_reps},
                   {"graph_checks", res.stats.graph_checks}});
  switch (res.status) {
    case SearchStatus::witness_found: {
      json cert = witness_to_json(*res.witness);
      out.kv("witness", cert);
      out.text_line("witness found: |S| = " +
                    std::to_string(res.witness->set.size()) + ", |Aut| = " +
                    res.witness->cayley_aut_order.to_string() + "  (" +
                    res.strategy_used + ")");
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << cert.dump(2) << "\n";
        out.text_line("certificate written to " + out_path);
      }
      return kExitOk;
    }
    case SearchStatus::none_exists:
      out.text_line("verified non-existence over " +
                    std::to_string(res.stats.orbit_reps) +
                    " orbit classes: " + R.display_name() + " is " +
                    (kind == WitnessKind::graph ? "GRR" : "DRR") +
                    "-detecting");
      return kExitOk;
    default:
      out.text_line("inconclusive: randomized budget of " +
                    std::to_string(budget) + " exhausted");
      return kExitInconclusive;
  }
}

int cmd_aut(const std::string& group_lit, const std::string& set_text,
            Output& out) {
  SquarefreeGroup R = parse_group(group_lit);
  const auto& auts = automorphism_group(R);
  out.kv("group", R.literal());
  out.kv("aut_order", auts.size());
  out.text_line("|Aut(" + R.display_name() + ")| = " +
                std::to_string(auts.size()));
  json gens = json::array();
  for (const GroupAutomorphism& phi : auts) {
    json g;
    g["z"] = element_to_json(phi.z_image);
    g["y"] = element_to_json(phi.y_image);
    g["x"] = element_to_json(phi.x_image);
    gens.push_back(g);
  }
  out.kv("automorphisms", gens);
  if (!set_text.empty()) {
    ConnectionSet S = parse_connection_set(R, set_text);
    AutStabReport stab = set_stabilizer(R, S);
    out.kv("stabilizer_order", stab.stabilizer.size());
    out.kv("stabilizer_trivial", stab.trivial);
    out.text_line("|Aut(R)_S| = " + std::to_string(stab.stabilizer.size()) +
                  (stab.trivial ? " (trivial)" : ""));
  }
  return kExitOk;
}

int cmd_verify_paper(const std::string& suite, Output& out) {
  std::vector<SuiteResult> results;
  if (suite == "all") {
    results = run_all_suites();
  } else {
    results.push_back(run_suite(suite));
  }
  bool all_pass = true;
  json rows = json::array();
  for (const SuiteResult& r : results) {
    std::ostringstream line;
    line << (r.pass ? "[PASS] " : (r.stretch ? "[FAIL:stretch] " : "[FAIL] "))
         << std::left << std::setw(28) << r.name << " " << std::fixed
         << std::setprecision(1) << r.seconds << "s  " << r.detail;
    out.text_line(line.str());
    if (!r.pass && !r.stretch) all_pass = false;
    rows.push_back({{"suite", r.name},
                    {"pass", r.pass},
                    {"stretch", r.stretch},
                    {"seconds", r.seconds},
                    {"detail", r.detail}});
  }
  out.kv("results", rows);
  out.kv("all_pass", all_pass);
  return all_pass ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regrep: DRR/GRR detection for groups of squarefree order"};
  app.require_subcommand(1);

  bool as_json = false;
  app.add_flag("--json", as_json, "emit JSON instead of text");

  // enumerate
  auto* enumerate = app.add_subcommand(
      "enumerate", "list the groups of a given squarefree order");
  uint64_t enum_order = 0;
  enumerate->add_option("order", enum_order, "group order")->required();

  // classify
  auto* classify_cmd = app.add_subcommand(
      "classify", "DRR/GRR detection verdicts per the classification");
  uint64_t classify_order = 0;
  std::string classify_group;
  uint64_t classify_max_order = 0;
  classify_cmd->add_option("--order", classify_order,
                           "classify every group of this order");
  classify_cmd->add_option("--group", classify_group, "one group literal");
  classify_cmd->add_option("--max-order", classify_max_order,
                           "classify all squarefree orders up to this bound");

  // check
  auto* check = app.add_subcommand("check", "checks on one Cayley (di)graph");
  std::string check_group, check_set, check_cert;
  bool check_drr = false, check_grr = false, check_wreath = false,
       check_norm = false, check_dot = false;
  check->add_option("group", check_group, "group literal");
  check->add_option("--set", check_set, "connection set");
  check->add_flag("--drr", check_drr, "decide whether Cay(R,S) is a DRR");
  check->add_flag("--grr", check_grr, "decide whether Cay(R,S) is a GRR");
  check->add_flag("--wreath", check_wreath,
                  "scan for a generalised wreath decomposition");
  check->add_flag("--normaliser", check_norm,
                  "verify the normaliser identity on this set");
  check->add_flag("--dot", check_dot, "emit the digraph in DOT format");
  check->add_option("--certificate", check_cert,
                    "re-validate a certificate JSON file");

  // witness
  auto* witness = app.add_subcommand("witness", "search for witness sets");
  std::string wit_group, wit_kind = "digraph", wit_strategy = "exhaustive",
              wit_out;
  uint64_t wit_budget = 1'000'000, wit_seed = 1;
  witness->add_option("group", wit_group, "group literal")->required();
  witness->add_option("--kind", wit_kind, "digraph|graph");
  witness->add_option("--strategy", wit_strategy,
                      "exhaustive|structured|randomized");
  witness->add_option("--budget", wit_budget, "randomized sample budget");
  witness->add_option("--seed", wit_seed, "randomized seed");
  witness->add_option("--out", wit_out, "write the certificate JSON here");

  // aut
  auto* aut = app.add_subcommand("aut", "automorphism group of R");
  std::string aut_group, aut_set;
  aut->add_option("group", aut_group, "group literal")->required();
  aut->add_option("--set", aut_set, "also compute the set stabilizer");

  // verify-paper
  auto* verify = app.add_subcommand(
      "verify-paper", "run the named verification suite (or 'all')");
  std::string suite;
  verify->add_option("suite", suite, "suite name or 'all'")->required();
  bool list_suites = false;
  verify->add_flag("--list", list_suites, "list available suites");

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.as_json = as_json;
  int rc = kExitError;
  try {
    if (*enumerate) {
      rc = cmd_enumerate(enum_order, out);
      out.flush("enumerate");
    } else if (*classify_cmd) {
      std::vector<SquarefreeGroup> groups;
      if (!classify_group.empty()) {
        groups.push_back(parse_group(classify_group));
      } else if (classify_order) {
        groups = enumerate_groups(classify_order);
      } else if (classify_max_order) {
        for (uint64_t o : squarefree_orders_up_to(classify_max_order))
          for (const SquarefreeGroup& g : enumerate_groups(o))
            groups.push_back(g);
      } else {
        std::cerr << "classify: need --order, --group or --max-order\n";
        return kExitError;
      }
      rc = cmd_classify(groups, out);
      out.flush("classify");
    } else if (*check) {
      if (!check_cert.empty()) {
        rc = cmd_check_certificate(check_cert, out);
      } else {
        require(!check_group.empty(), ErrorCode::ParseError,
                "check: need a group literal or --certificate");
        rc = cmd_check(check_group, check_set, check_drr, check_grr,
                       check_wreath, check_norm, check_dot, out);
      }
      out.flush("check");
    } else if (*witness) {
      rc = cmd_witness(wit_group, wit_kind, wit_strategy, wit_budget, wit_seed,
                       wit_out, out);
      out.flush("witness");
    } else if (*aut) {
      rc = cmd_aut(aut_group, aut_set, out);
      out.flush("aut");
    } else if (*verify) {
      if (list_suites) {
        for (const std::string& name : suite_names()) std::cout << name << "\n";
        return kExitOk;
      }
      rc = cmd_verify_paper(suite, out);
      out.flush("verify-paper");
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return rc;
}
