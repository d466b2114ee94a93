#include "direct.hpp"

#include <sstream>

namespace ptast {

ConstraintSet direct_ast_constraints(const PTRS& r, DegreeMode degree, TemplateBuilder& tb) {
  const Signature& sig = r.sig();
  (void)degree;
  for (const ProbRule& rule : r.rules()) {
    tb.ensure_term_symbols(rule.lhs);
    for (const auto& [p, t] : rule.rhs.entries()) {
      (void)p;
      tb.ensure_term_symbols(t);
    }
  }
  Interpretation interp = tb.interpretation();
  std::vector<PolyAtom> atoms;
  std::vector<DisjGroup> groups;
  for (size_t i = 0; i < r.rules().size(); ++i) {
    const ProbRule& rule = r.rules()[i];
    Polynomial lhs = interpret(rule.lhs, interp, sig);
    std::string rl = "rule " + std::to_string(i + 1);
    atoms.push_back(PolyAtom{PolyAtom::Geq, lhs, expected_poly(rule.rhs, interp, sig),
                             rl + ": expected weak decrease"});
    DisjGroup g;
    g.label = rl + ": some branch strictly decreases";
    for (const auto& [p, t] : rule.rhs.entries()) {
      (void)p;
      g.alternatives.push_back(
          {PolyAtom{PolyAtom::Gt, lhs, interpret(t, interp, sig), rl + " strict branch"}});
    }
    groups.push_back(std::move(g));
  }
  return tb.finish_constraints(std::move(atoms), std::move(groups),
                               "system " + (r.name().empty() ? std::string("?") : r.name()) +
                                   ", direct AST criterion");
}

std::optional<DirectProof> prove_ast_direct(const PTRS& r, const SolverOptions& opts,
                                            DegreeMode degree) {
  if (r.rules().empty()) {
    return DirectProof{Interpretation{}, {}, degree};
  }
  TemplateBuilder tb(r.sig(), degree, /*monotone_strict=*/true, /*com_additive=*/false);
  ConstraintSet cs = direct_ast_constraints(r, degree, tb);
  SolveResult sr = solve_bounded(cs, opts);
  if (sr.status != SolveStatus::Sat) return std::nullopt;
  DirectProof proof{tb.concretize(sr.assignment), sr.chosen_alt, degree};
  CheckReport rep = check_direct_ast(r, proof.interp);
  if (!rep.ok) throw std::logic_error("unchecked direct proof: " + rep.failure);
  return proof;
}

std::optional<DirectProof> prove_terminating_classic(const std::vector<NonProbRule>& rules,
                                                     const Signature& sig,
                                                     const SolverOptions& opts, DegreeMode degree) {
  if (rules.empty()) return DirectProof{Interpretation{}, {}, degree};
  TemplateBuilder tb(sig, degree, /*monotone_strict=*/true, /*com_additive=*/false);
  for (const NonProbRule& rule : rules) {
    tb.ensure_term_symbols(rule.lhs);
    tb.ensure_term_symbols(rule.rhs);
  }
  Interpretation interp = tb.interpretation();
  std::vector<PolyAtom> atoms;
  for (size_t i = 0; i < rules.size(); ++i)
    atoms.push_back(PolyAtom{PolyAtom::Gt, interpret(rules[i].lhs, interp, sig),
                             interpret(rules[i].rhs, interp, sig),
                             "rule " + std::to_string(i + 1) + ": strict decrease"});
  ConstraintSet cs = tb.finish_constraints(std::move(atoms), {}, "classic termination criterion");
  SolveResult sr = solve_bounded(cs, opts);
  if (sr.status != SolveStatus::Sat) return std::nullopt;
  DirectProof proof{tb.concretize(sr.assignment), {}, degree};
  CheckReport rep = check_classic_termination(rules, sig, proof.interp);
  if (!rep.ok) throw std::logic_error("unchecked classic proof: " + rep.failure);
  return proof;
}

bool interpretation_monotone(const Interpretation& interp, const Signature& sig) {
  for (const auto& [sym, tpl] : interp.symbols) {
    int arity = sig.symbol(sym).arity;
    for (int a = 0; a < arity; ++a) {
      auto it = tpl.coeffs.find({a});
      if (it == tpl.coeffs.end() || it->second.constant_value() < 1) return false;
    }
  }
  return true;
}

CheckReport check_direct_ast(const PTRS& r, const Interpretation& interp) {
  const Signature& sig = r.sig();
  if (!interpretation_monotone(interp, sig))
    return {false, "interpretation is not monotone (some argument coefficient < 1)"};
  for (size_t i = 0; i < r.rules().size(); ++i) {
    const ProbRule& rule = r.rules()[i];
    Polynomial lhs = interpret(rule.lhs, interp, sig);
    bool strict = false;
    for (const auto& [p, t] : rule.rhs.entries()) {
      (void)p;
      if (atom_holds_concrete(PolyAtom{PolyAtom::Gt, lhs, interpret(t, interp, sig), ""})) {
        strict = true;
        break;
      }
    }
    if (!strict)
      return {false, "rule " + std::to_string(i + 1) + " (" + print_rule(rule, sig) +
                         "): no branch is strictly decreasing (condition 1)"};
    if (!atom_holds_concrete(
            PolyAtom{PolyAtom::Geq, lhs, expected_poly(rule.rhs, interp, sig), ""}))
      return {false, "rule " + std::to_string(i + 1) +
                         ": expected value not weakly decreasing (condition 2)"};
  }
  return {};
}

CheckReport check_classic_termination(const std::vector<NonProbRule>& rules,
                                      const Signature& sig, const Interpretation& interp) {
  if (!interpretation_monotone(interp, sig))
    return {false, "interpretation is not monotone"};
  for (size_t i = 0; i < rules.size(); ++i) {
    if (!atom_holds_concrete(PolyAtom{PolyAtom::Gt, interpret(rules[i].lhs, interp, sig),
                                      interpret(rules[i].rhs, interp, sig), ""}))
      return {false, "rule " + std::to_string(i + 1) + " is not strictly decreasing"};
  }
  return {};
}

}  // namespace ptast
