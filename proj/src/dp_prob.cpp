#include "dp_prob.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ptast {

namespace {

std::vector<Term> np_lhss_of(const PTRS& s) {
  std::vector<Term> out;
  for (const NonProbRule& r : np(s)) out.push_back(r.lhs);
  return out;
}

bool term_usable(const Term& t_sharp, const Term& from_lhs_sharp,
                 const std::vector<CoupledDT>& p, const std::vector<Term>& np_lhss,
                 const std::vector<Term>& s_lhss) {
  for (const CoupledDT& to : p)
    if (estimated_edge(from_lhs_sharp, t_sharp, to.lhs_sharp, np_lhss, s_lhss)) return true;
  return false;
}

}  // namespace

std::vector<std::pair<size_t, size_t>> prob_dep_graph(const std::vector<CoupledDT>& p,
                                                      const PTRS& s) {
  std::vector<Term> npl = np_lhss_of(s);
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < p.size(); ++i) {
    std::set<size_t> targets;
    for (const auto& [pr, br] : p[i].rhs.entries()) {
      (void)pr;
      for (const Term& t : cont(br.d, s.sig()))
        for (size_t j = 0; j < p.size(); ++j)
          if (!targets.count(j) &&
              estimated_edge(p[i].lhs_sharp, t, p[j].lhs_sharp, npl, s.lhss()))
            targets.insert(j);
    }
    for (size_t j : targets) edges.emplace_back(i, j);
  }
  return edges;
}

std::vector<std::vector<size_t>> prob_scc_processor(const ProbDPProblem& prob) {
  return scc_split(prob.pairs.size(), prob_dep_graph(prob.pairs, prob.rules));
}

std::vector<CoupledDT> usable_terms_processor(const std::vector<CoupledDT>& p, const PTRS& s) {
  Signature& sig = s.sig_mut();
  std::vector<Term> npl = np_lhss_of(s);
  std::vector<CoupledDT> out;
  for (const CoupledDT& dt : p) {
    std::vector<std::pair<Rational, DTBranch>> entries;
    for (const auto& [pr, br] : dt.rhs.entries()) {
      std::vector<Term> kept;
      for (const Term& t : cont(br.d, sig))
        if (term_usable(t, dt.lhs_sharp, p, npl, s.lhss())) kept.push_back(t);
      int sym = sig.compound_symbol(static_cast<int>(kept.size()));
      entries.emplace_back(pr, DTBranch{Term::app(sym, Terms(kept.begin(), kept.end())), br.r});
    }
    out.push_back(CoupledDT{dt.lhs_sharp, dt.lhs, MultiDistribution<DTBranch>(std::move(entries))});
  }
  return out;
}

std::vector<size_t> prob_usable_rules(const std::vector<CoupledDT>& p, const PTRS& s) {
  std::set<int> seen_syms;
  std::vector<Term> work;
  for (const CoupledDT& dt : p)
    for (const auto& [pr, br] : dt.rhs.entries()) {
      (void)pr;
      work.push_back(br.d);
    }
  auto consider = [&](const Term& t, auto&& self, std::vector<Term>& queue) -> void {
    if (t.is_var()) return;
    if (seen_syms.insert(t.sym()).second) {
      for (const ProbRule& rule : s.rules())
        if (rule.lhs.sym() == t.sym())
          for (const auto& [pr2, rhs] : rule.rhs.entries()) {
            (void)pr2;
            queue.push_back(rhs);
          }
    }
    for (const Term& a : t.args()) self(a, self, queue);
  };
  while (!work.empty()) {
    Term t = work.back();
    work.pop_back();
    consider(t, consider, work);
  }
  std::vector<size_t> out;
  for (size_t i = 0; i < s.rules().size(); ++i)
    if (seen_syms.count(s.rules()[i].lhs.sym())) out.push_back(i);
  return out;
}

ConstraintSet prob_rpp_constraints(const ProbDPProblem& prob, DegreeMode degree,
                                   size_t strict_dt, size_t strict_branch, TemplateBuilder& tb) {
  const Signature& sig = prob.rules.sig();
  (void)degree;
  for (const ProbRule& rule : prob.rules.rules()) {
    tb.ensure_term_symbols(rule.lhs);
    for (const auto& [p, t] : rule.rhs.entries()) {
      (void)p;
      tb.ensure_term_symbols(t);
    }
  }
  for (const CoupledDT& dt : prob.pairs) {
    tb.ensure_term_symbols(dt.lhs_sharp);
    for (const auto& [p, br] : dt.rhs.entries()) {
      (void)p;
      tb.ensure_term_symbols(br.d);
    }
  }
  Interpretation interp = tb.interpretation();
  std::vector<PolyAtom> atoms;
  for (size_t i = 0; i < prob.rules.rules().size(); ++i) {
    const ProbRule& rule = prob.rules.rules()[i];
    atoms.push_back(PolyAtom{PolyAtom::Geq, interpret(rule.lhs, interp, sig),
                             expected_poly(rule.rhs, interp, sig),
                             "rule " + std::to_string(i + 1) + " expected weak decrease"});
  }
  for (size_t i = 0; i < prob.pairs.size(); ++i) {
    const CoupledDT& dt = prob.pairs[i];
    Polynomial lhs = interpret(dt.lhs_sharp, interp, sig);
    Polynomial expect;
    for (const auto& [p, br] : dt.rhs.entries()) expect += interpret(br.d, interp, sig).scaled(p);
    atoms.push_back(PolyAtom{PolyAtom::Geq, lhs, expect,
                             "tuple " + std::to_string(i + 1) + " expected weak decrease"});
    if (i == strict_dt) {
      const DTBranch& br = dt.rhs.entries().at(strict_branch).second;
      atoms.push_back(PolyAtom{PolyAtom::Gt, lhs, interpret(br.d, interp, sig),
                               "tuple " + std::to_string(i + 1) + " branch " +
                                   std::to_string(strict_branch + 1) + " strict decrease"});
      bool in_s = false;
      ProbRule p2 = dt.proj2();
      for (const ProbRule& rule : prob.rules.rules())
        if (rule == p2) in_s = true;
      if (in_s)
        atoms.push_back(PolyAtom{PolyAtom::Geq, interpret(dt.lhs, interp, sig),
                                 interpret(br.r, interp, sig),
                                 "tuple " + std::to_string(i + 1) + " companion rule branch " +
                                     std::to_string(strict_branch + 1) + " weak decrease"});
    }
  }
  return tb.finish_constraints(std::move(atoms), {}, "probabilistic reduction pair processor");
}

namespace {

// was the strictness condition (3) met by this DT under the interpretation?
bool dt_strict(const CoupledDT& dt, const PTRS& s, const Interpretation& interp,
               const Signature& sig) {
  Polynomial lhs = interpret(dt.lhs_sharp, interp, sig);
  bool in_s = false;
  ProbRule p2 = dt.proj2();
  for (const ProbRule& rule : s.rules())
    if (rule == p2) in_s = true;
  for (const auto& [p, br] : dt.rhs.entries()) {
    (void)p;
    if (!atom_holds_concrete(PolyAtom{PolyAtom::Gt, lhs, interpret(br.d, interp, sig), ""}))
      continue;
    if (in_s && !atom_holds_concrete(PolyAtom{PolyAtom::Geq, interpret(dt.lhs, interp, sig),
                                              interpret(br.r, interp, sig), ""}))
      continue;
    return true;
  }
  return false;
}

}  // namespace

std::optional<ProbRppResult> prob_reduction_pair_processor(const ProbDPProblem& prob,
                                                           const SolverOptions& opts,
                                                           DegreeMode degree,
                                                           bool* budget_limited,
                                                           unsigned long long* nodes_accum) {
  const Signature& sig = prob.rules.sig();
  if (budget_limited) *budget_limited = false;
  if (prob.pairs.empty()) return std::nullopt;
  unsigned long long used = 0;  // node_budget is the total over all candidates
  for (size_t cand = 0; cand < prob.pairs.size(); ++cand) {
    for (size_t br = 0; br < prob.pairs[cand].rhs.size(); ++br) {
      if (used >= opts.node_budget) {
        if (budget_limited) *budget_limited = true;
        return std::nullopt;
      }
      TemplateBuilder tb(sig, degree, /*monotone_strict=*/false, /*com_additive=*/true);
      ConstraintSet cs = prob_rpp_constraints(prob, degree, cand, br, tb);
      SolverOptions so = opts;
      so.node_budget = opts.node_budget - used;
      SolveResult sr = solve_bounded(cs, so);
      used += sr.nodes;
      if (nodes_accum) *nodes_accum += sr.nodes;
      if (sr.status == SolveStatus::Budget && budget_limited) *budget_limited = true;
      if (sr.status != SolveStatus::Sat) continue;
      Interpretation interp = tb.concretize(sr.assignment);
      std::vector<size_t> removed;
      for (size_t i = 0; i < prob.pairs.size(); ++i)
        if (dt_strict(prob.pairs[i], prob.rules, interp, sig)) removed.push_back(i);
      ProbRppResult res{std::move(interp), std::move(removed), degree};
      CheckReport rep = check_prob_rpp(prob, res.interp, res.removed);
      if (!rep.ok) throw std::logic_error("unchecked probabilistic RPP result: " + rep.failure);
      return res;
    }
  }
  return std::nullopt;
}

CheckReport check_prob_rpp(const ProbDPProblem& prob, const Interpretation& interp,
                           const std::vector<size_t>& removed) {
  const Signature& sig = prob.rules.sig();
  if (removed.empty()) return {false, "no dependency tuple removed"};
  if (!interp.com_additive) return {false, "interpretation is not Com-additive"};
  for (const auto& [sym, tpl] : interp.symbols)
    for (const auto& [mono, coeff] : tpl.coeffs) {
      (void)mono;
      if (coeff.constant_value() < 0)
        return {false, "negative coefficient for '" + sig.symbol(sym).name + "'"};
    }
  for (size_t i = 0; i < prob.rules.rules().size(); ++i) {
    const ProbRule& rule = prob.rules.rules()[i];
    if (!atom_holds_concrete(PolyAtom{PolyAtom::Geq, interpret(rule.lhs, interp, sig),
                                      expected_poly(rule.rhs, interp, sig), ""}))
      return {false, "rule " + std::to_string(i + 1) + ": expected value not weakly decreasing"};
  }
  for (size_t i = 0; i < prob.pairs.size(); ++i) {
    const CoupledDT& dt = prob.pairs[i];
    Polynomial lhs = interpret(dt.lhs_sharp, interp, sig);
    Polynomial expect;
    for (const auto& [p, brr] : dt.rhs.entries()) expect += interpret(brr.d, interp, sig).scaled(p);
    if (!atom_holds_concrete(PolyAtom{PolyAtom::Geq, lhs, expect, ""}))
      return {false, "tuple " + std::to_string(i + 1) + ": expected value not weakly decreasing"};
  }
  for (size_t i : removed)
    if (!dt_strict(prob.pairs.at(i), prob.rules, interp, sig))
      return {false, "tuple " + std::to_string(i + 1) + ": strictness condition fails"};
  return {};
}

std::optional<ClassicDPProblem> probability_removal(const ProbDPProblem& prob) {
  for (const CoupledDT& dt : prob.pairs)
    if (dt.rhs.size() != 1) return std::nullopt;
  if (!prob.rules.deterministic()) return std::nullopt;
  ClassicDPProblem out;
  const Signature& sig = prob.rules.sig();
  for (size_t i = 0; i < prob.pairs.size(); ++i) {
    const DTBranch& br = prob.pairs[i].rhs.entries()[0].second;
    for (const Term& t : cont(br.d, sig))
      out.pairs.push_back(DependencyPair{prob.pairs[i].lhs_sharp, t, i, {}});
  }
  out.rules = Trs::from(prob.rules.sig_ptr(), np(prob.rules));
  return out;
}

namespace {

struct ProbDriver {
  const ProveOptions& opts;
  std::vector<std::string>* frontier;
  unsigned long long nodes_used = 0;

  bool deadline_passed() const {
    return opts.solver.deadline && std::chrono::steady_clock::now() > *opts.solver.deadline;
  }
  unsigned long long nodes_left() const {
    return opts.solver.node_budget > nodes_used ? opts.solver.node_budget - nodes_used : 0;
  }

  bool solve(const ProbDPProblem& prob, ProbNode& node, std::set<std::string>& seen) {
    if (prob.pairs.empty()) {
      node.processor = "empty";
      return true;
    }
    if (deadline_passed()) {
      node.processor = "open";
      node.note = "timeout";
      frontier->push_back(print_problem(prob));
      return false;
    }
    auto sccs = prob_scc_processor(prob);
    bool whole = sccs.size() == 1 && sccs[0].size() == prob.pairs.size();
    if (!whole) {
      node.processor = "dependency-graph";
      node.sccs = sccs;
      bool all = true;
      for (const auto& scc : sccs) {
        ProbDPProblem sub;
        for (size_t i : scc) sub.pairs.push_back(prob.pairs[i]);
        sub.rules = prob.rules;
        ProbNode child;
        if (!solve(sub, child, seen)) all = false;
        node.children.push_back(std::move(child));
      }
      if (sccs.empty()) return true;
      return all;
    }
    std::string fp = fingerprint(prob);
    if (!seen.insert(fp).second) {
      node.processor = "open";
      node.note = "repeated problem";
      frontier->push_back(print_problem(prob));
      return false;
    }
    bool ok = solve_scc(prob, node, seen);
    seen.erase(fp);
    return ok;
  }

  bool solve_scc(const ProbDPProblem& prob, ProbNode& node, std::set<std::string>& seen) {
    // usable terms
    std::vector<CoupledDT> ut = usable_terms_processor(prob.pairs, prob.rules);
    if (!same_pairs(ut, prob.pairs)) {
      node.processor = "usable-terms";
      ProbNode child;
      bool ok = solve(ProbDPProblem{std::move(ut), prob.rules}, child, seen);
      node.children.push_back(std::move(child));
      return ok;
    }
    // usable rules
    std::vector<size_t> ur = prob_usable_rules(prob.pairs, prob.rules);
    if (ur.size() < prob.rules.rules().size()) {
      node.processor = "usable-rules";
      node.indices = ur;
      std::vector<ProbRule> kept;
      for (size_t i : ur) kept.push_back(prob.rules.rules()[i]);
      ProbNode child;
      bool ok = solve(ProbDPProblem{prob.pairs, prob.rules.with_rules(std::move(kept))}, child,
                      seen);
      node.children.push_back(std::move(child));
      return ok;
    }
    // probability removal
    if (auto classic = probability_removal(prob)) {
      ClassicOutcome co = prove_iterm_problem(*classic, opts);
      if (co.proved) {
        node.processor = "probability-removal";
        node.classic = std::move(co);
        return true;
      }
      // not disproved: fall through to the reduction pair processor
    }
    // reduction pair, with degree escalation and budget-doubling rounds
    std::vector<DegreeMode> ladder;
    if (opts.degree == DegreeMode::Multilinear || !opts.escalate_degree)
      ladder = {opts.degree};
    else
      ladder = {DegreeMode::Linear, DegreeMode::Multilinear};
    unsigned long long budget = opts.attempt_budget;
    for (int round = 0; round < 16; ++round) {
      bool any_limited = false;
      for (DegreeMode deg : ladder) {
        if (deadline_passed() || nodes_left() == 0) break;
        SolverOptions so = opts.solver;
        so.node_budget = std::min<unsigned long long>(std::min(so.node_budget, budget),
                                                      std::max<unsigned long long>(nodes_left(), 1));
        if (opts.emit_constraints && !prob.pairs.empty()) {
          TemplateBuilder tb(prob.rules.sig(), deg, false, true);
          opts.emit_constraints("prob-rpp", prob_rpp_constraints(prob, deg, 0, 0, tb));
        }
        bool limited = false;
        auto rpp = prob_reduction_pair_processor(prob, so, deg, &limited, &nodes_used);
        any_limited = any_limited || limited;
        if (!rpp) continue;
        node.processor = "reduction-pair";
        node.indices = rpp->removed;
        node.interp = rpp->interp;
        node.degree = deg;
        ProbDPProblem rest;
        std::set<size_t> rem(rpp->removed.begin(), rpp->removed.end());
        for (size_t i = 0; i < prob.pairs.size(); ++i)
          if (!rem.count(i)) rest.pairs.push_back(prob.pairs[i]);
        rest.rules = prob.rules;
        ProbNode child;
        bool ok = solve(rest, child, seen);
        node.children.push_back(std::move(child));
        return ok;
      }
      if (!any_limited || deadline_passed() || nodes_left() == 0) break;
      budget *= 2;
    }
    node.processor = "open";
    node.note = "no applicable processor makes progress";
    frontier->push_back(print_problem(prob));
    return false;
  }

  static bool same_pairs(const std::vector<CoupledDT>& a, const std::vector<CoupledDT>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (!(a[i].lhs_sharp == b[i].lhs_sharp) || !(a[i].lhs == b[i].lhs)) return false;
      if (a[i].rhs.size() != b[i].rhs.size()) return false;
      for (size_t j = 0; j < a[i].rhs.size(); ++j) {
        if (a[i].rhs.entries()[j].first != b[i].rhs.entries()[j].first) return false;
        if (!(a[i].rhs.entries()[j].second.d == b[i].rhs.entries()[j].second.d)) return false;
        if (!(a[i].rhs.entries()[j].second.r == b[i].rhs.entries()[j].second.r)) return false;
      }
    }
    return true;
  }

  static std::string fingerprint(const ProbDPProblem& prob) { return print_problem(prob); }
};

}  // namespace

ProbOutcome prove_iast_problem(const ProbDPProblem& prob, const ProveOptions& opts) {
  ProbOutcome out;
  ProbDriver driver{opts, &out.frontier};
  std::set<std::string> seen;
  out.proved = driver.solve(prob, out.root, seen);
  if (!out.proved) out.note = "no proof found";
  return out;
}

ProbOutcome prove_iast(const PTRS& r, const ProveOptions& opts) {
  return prove_iast_problem(ProbDPProblem{dtuples(r), r}, opts);
}

std::string prob_graph_dot(const std::vector<CoupledDT>& p, const PTRS& s) {
  std::ostringstream os;
  os << "digraph prob_dependency_graph {\n";
  for (size_t i = 0; i < p.size(); ++i)
    os << "  t" << i + 1 << " [label=\"(" << i + 1 << ") "
       << term_str(p[i].lhs_sharp, s.sig()) << "\"];\n";
  for (auto& [a, b] : prob_dep_graph(p, s)) os << "  t" << a + 1 << " -> t" << b + 1 << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ptast
