#include "certificate.hpp"

#include <json.hpp>

namespace ptast {

using Json = nlohmann::ordered_json;

namespace {

std::string mono_key(const std::vector<int>& mono) {
  if (mono.empty()) return "1";
  std::string k;
  for (size_t i = 0; i < mono.size(); ++i) {
    if (i) k += "*";
    k += "x" + std::to_string(mono[i] + 1);
  }
  return k;
}

Json interp_json(const Interpretation& interp, const Signature& sig) {
  Json out = Json::object();
  for (const auto& [sym, tpl] : interp.symbols) {
    Json m = Json::object();
    for (const auto& [mono, coeff] : tpl.coeffs)
      m[mono_key(mono)] = rat_str(coeff.constant_value());
    out[sig.symbol(sym).name] = std::move(m);
  }
  return out;
}

Json indices_json(const std::vector<size_t>& v) {
  Json a = Json::array();
  for (size_t i : v) a.push_back(i + 1);
  return a;
}

Json classic_node_json(const ClassicNode& n, const Signature& sig) {
  Json out = Json::object();
  out["processor"] = n.processor.empty() ? "empty" : n.processor;
  Json params = Json::object();
  if (n.processor == "classic-dependency-graph") {
    // children carry their SCC index sets
    Json sccs = Json::array();
    for (const ClassicNode& c : n.children) sccs.push_back(indices_json(c.scc_or_removed));
    params["sccs"] = std::move(sccs);
  } else if (n.processor == "classic-usable-rules") {
    params["kept"] = indices_json(n.scc_or_removed);
  } else if (n.processor == "classic-reduction-pair") {
    params["removed"] = indices_json(n.scc_or_removed);
    params["degree"] = n.degree == DegreeMode::Linear ? "linear" : "multilinear";
  }
  out["params"] = std::move(params);
  if (n.interp) out["interpretation"] = interp_json(*n.interp, sig);
  Json children = Json::array();
  for (const ClassicNode& c : n.children) children.push_back(classic_node_json(c, sig));
  out["children"] = std::move(children);
  return out;
}

Json prob_node_json(const ProbNode& n, const Signature& sig) {
  Json out = Json::object();
  out["processor"] = n.processor.empty() ? "empty" : n.processor;
  Json params = Json::object();
  if (n.processor == "dependency-graph") {
    Json sccs = Json::array();
    for (const auto& scc : n.sccs) sccs.push_back(indices_json(scc));
    params["sccs"] = std::move(sccs);
  } else if (n.processor == "usable-rules") {
    params["kept"] = indices_json(n.indices);
  } else if (n.processor == "reduction-pair") {
    params["removed"] = indices_json(n.indices);
    params["degree"] = n.degree == DegreeMode::Linear ? "linear" : "multilinear";
  } else if (n.processor == "probability-removal") {
    params["classic"] = n.classic ? classic_node_json(n.classic->root, sig) : Json();
  }
  if (!n.note.empty()) params["note"] = n.note;
  out["params"] = std::move(params);
  if (n.interp) out["interpretation"] = interp_json(*n.interp, sig);
  Json children = Json::array();
  for (const ProbNode& c : n.children) children.push_back(prob_node_json(c, sig));
  out["children"] = std::move(children);
  return out;
}

}  // namespace

std::string certificate_json_dp(const PTRS& r, const ProbOutcome& outcome) {
  Json out = Json::object();
  out["system"] = r.name();
  out["property"] = "iAST";
  out["verdict"] = outcome.proved ? "proved" : "unknown";
  out["tree"] = Json::array({prob_node_json(outcome.root, r.sig())});
  return out.dump(2) + "\n";
}

std::string certificate_json_direct(const PTRS& r, const std::optional<DirectProof>& proof) {
  Json out = Json::object();
  out["system"] = r.name();
  out["property"] = "AST";
  out["verdict"] = proof ? "proved" : "unknown";
  Json tree = Json::array();
  if (proof) {
    Json node = Json::object();
    node["processor"] = "direct-polynomial";
    Json params = Json::object();
    params["degree"] = proof->degree == DegreeMode::Linear ? "linear" : "multilinear";
    node["params"] = std::move(params);
    node["interpretation"] = interp_json(proof->interp, r.sig());
    node["children"] = Json::array();
    tree.push_back(std::move(node));
  }
  out["tree"] = std::move(tree);
  return out.dump(2) + "\n";
}

namespace {

struct Validator {
  const PTRS& sys;
  const Signature& sig;

  std::vector<int> parse_mono(const std::string& key) const {
    if (key == "1") return {};
    std::vector<int> mono;
    size_t pos = 0;
    while (pos < key.size()) {
      if (key[pos] != 'x') throw std::runtime_error("bad monomial key '" + key + "'");
      size_t end = key.find('*', pos);
      std::string num = key.substr(pos + 1, end == std::string::npos ? end : end - pos - 1);
      mono.push_back(std::stoi(num) - 1);
      if (end == std::string::npos) break;
      pos = end + 1;
    }
    return mono;
  }

  Rational parse_rat(const std::string& s) const {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  }

  Interpretation parse_interp(const Json& j, bool com_additive) const {
    Interpretation out;
    out.com_additive = com_additive;
    for (auto it = j.begin(); it != j.end(); ++it) {
      int sym = sig.find_symbol(it.key());
      if (sym < 0) throw std::runtime_error("unknown symbol '" + it.key() + "' in certificate");
      SymbolPoly tpl;
      for (auto mt = it.value().begin(); mt != it.value().end(); ++mt)
        tpl.coeffs[parse_mono(mt.key())] =
            CoeffPoly::constant(parse_rat(mt.value().get<std::string>()));
      out.symbols[sym] = std::move(tpl);
    }
    return out;
  }

  static std::vector<size_t> parse_indices(const Json& j) {
    std::vector<size_t> out;
    for (const auto& v : j) out.push_back(v.get<size_t>() - 1);
    return out;
  }

  CheckReport check_classic(const ClassicDPProblem& prob, const Json& node) const {
    std::string proc = node.at("processor").get<std::string>();
    const Json& children = node.at("children");
    if (proc == "empty") {
      if (!prob.pairs.empty()) return {false, "leaf with a nonempty problem"};
      return {};
    }
    if (proc == "classic-dependency-graph") {
      auto sccs = scc_processor(prob);
      const Json& want = node.at("params").at("sccs");
      if (want.size() != sccs.size()) return {false, "classic SCC split differs"};
      for (size_t k = 0; k < sccs.size(); ++k)
        if (parse_indices(want[k]) != sccs[k]) return {false, "classic SCC split differs"};
      if (children.size() != sccs.size()) return {false, "child count differs from SCC count"};
      for (size_t k = 0; k < sccs.size(); ++k) {
        ClassicDPProblem sub;
        for (size_t i : sccs[k]) sub.pairs.push_back(prob.pairs[i]);
        sub.rules = prob.rules;
        CheckReport r = check_classic(sub, children[k]);
        if (!r.ok) return r;
      }
      return {};
    }
    if (proc == "classic-usable-rules") {
      auto ur = usable_rules(prob.pairs, prob.rules);
      if (parse_indices(node.at("params").at("kept")) != ur)
        return {false, "classic usable rules differ"};
      if (children.size() != 1) return {false, "usable-rules node needs one child"};
      ClassicDPProblem sub;
      sub.pairs = prob.pairs;
      std::vector<NonProbRule> kept;
      for (size_t i : ur) kept.push_back(prob.rules.rules[i]);
      sub.rules = Trs::from(prob.rules.sig, std::move(kept));
      return check_classic(sub, children[0]);
    }
    if (proc == "classic-reduction-pair") {
      Interpretation interp = parse_interp(node.at("interpretation"), false);
      std::vector<size_t> removed = parse_indices(node.at("params").at("removed"));
      CheckReport r = check_classic_rpp(prob, interp, removed);
      if (!r.ok) return r;
      if (children.size() != 1) return {false, "reduction-pair node needs one child"};
      ClassicDPProblem rest;
      std::set<size_t> rem(removed.begin(), removed.end());
      for (size_t i = 0; i < prob.pairs.size(); ++i)
        if (!rem.count(i)) rest.pairs.push_back(prob.pairs[i]);
      rest.rules = prob.rules;
      return check_classic(rest, children[0]);
    }
    return {false, "unknown classic processor '" + proc + "'"};
  }

  CheckReport check_prob(const ProbDPProblem& prob, const Json& node) const {
    std::string proc = node.at("processor").get<std::string>();
    const Json& children = node.at("children");
    if (proc == "empty") {
      if (!prob.pairs.empty()) return {false, "leaf with a nonempty problem"};
      return {};
    }
    if (proc == "dependency-graph") {
      auto sccs = prob_scc_processor(prob);
      const Json& want = node.at("params").at("sccs");
      if (want.size() != sccs.size()) return {false, "SCC split differs"};
      for (size_t k = 0; k < sccs.size(); ++k)
        if (parse_indices(want[k]) != sccs[k]) return {false, "SCC split differs"};
      if (children.size() != sccs.size()) return {false, "child count differs from SCC count"};
      for (size_t k = 0; k < sccs.size(); ++k) {
        ProbDPProblem sub;
        for (size_t i : sccs[k]) sub.pairs.push_back(prob.pairs[i]);
        sub.rules = prob.rules;
        CheckReport r = check_prob(sub, children[k]);
        if (!r.ok) return r;
      }
      return {};
    }
    if (proc == "usable-terms") {
      std::vector<CoupledDT> ut = usable_terms_processor(prob.pairs, prob.rules);
      if (children.size() != 1) return {false, "usable-terms node needs one child"};
      return check_prob(ProbDPProblem{std::move(ut), prob.rules}, children[0]);
    }
    if (proc == "usable-rules") {
      auto ur = prob_usable_rules(prob.pairs, prob.rules);
      if (parse_indices(node.at("params").at("kept")) != ur)
        return {false, "usable rules differ"};
      if (children.size() != 1) return {false, "usable-rules node needs one child"};
      std::vector<ProbRule> kept;
      for (size_t i : ur) kept.push_back(prob.rules.rules()[i]);
      return check_prob(ProbDPProblem{prob.pairs, prob.rules.with_rules(std::move(kept))},
                        children[0]);
    }
    if (proc == "probability-removal") {
      auto classic = probability_removal(prob);
      if (!classic) return {false, "probability removal not applicable"};
      return check_classic(*classic, node.at("params").at("classic"));
    }
    if (proc == "reduction-pair") {
      Interpretation interp = parse_interp(node.at("interpretation"), true);
      std::vector<size_t> removed = parse_indices(node.at("params").at("removed"));
      CheckReport r = check_prob_rpp(prob, interp, removed);
      if (!r.ok) return r;
      if (children.size() != 1) return {false, "reduction-pair node needs one child"};
      ProbDPProblem rest;
      std::set<size_t> rem(removed.begin(), removed.end());
      for (size_t i = 0; i < prob.pairs.size(); ++i)
        if (!rem.count(i)) rest.pairs.push_back(prob.pairs[i]);
      rest.rules = prob.rules;
      return check_prob(rest, children[0]);
    }
    return {false, "unknown processor '" + proc + "'"};
  }
};

}  // namespace

CheckReport validate_certificate_json(const PTRS& r, const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    return {false, std::string("certificate parse error: ") + e.what()};
  }
  try {
    if (j.at("verdict").get<std::string>() != "proved")
      return {true, "unknown verdict carries no proof obligation"};
    std::string prop = j.at("property").get<std::string>();
    Validator v{r, r.sig()};
    if (prop == "AST") {
      const Json& tree = j.at("tree");
      if (tree.size() != 1) return {false, "direct certificate needs one node"};
      Interpretation interp = v.parse_interp(tree[0].at("interpretation"), false);
      return check_direct_ast(r, interp);
    }
    if (prop == "iAST") {
      const Json& tree = j.at("tree");
      if (tree.size() != 1) return {false, "certificate needs one root node"};
      return v.check_prob(ProbDPProblem{dtuples(r), r}, tree[0]);
    }
    return {false, "unknown property '" + prop + "'"};
  } catch (const std::exception& e) {
    return {false, std::string("certificate replay error: ") + e.what()};
  }
}

}  // namespace ptast
