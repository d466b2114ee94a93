#include "dp_classic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dtuple.hpp"

namespace ptast {

Trs Trs::from(std::shared_ptr<Signature> sig, std::vector<NonProbRule> rules) {
  Trs t;
  t.sig = std::move(sig);
  for (NonProbRule& r : rules) t.lhss.push_back(r.lhs);
  t.rules = std::move(rules);
  return t;
}

Trs Trs::from_classified(std::shared_ptr<Signature> sig, std::vector<NonProbRule> rules) {
  Trs t = from(std::move(sig), std::move(rules));
  for (size_t i = 0; i < t.sig->symbol_count(); ++i) {
    SymbolInfo& s = t.sig->symbol_mut(static_cast<int>(i));
    if (s.kind == SymbolKind::Tuple || s.kind == SymbolKind::Compound) continue;
    s.kind = SymbolKind::Constructor;
  }
  for (const NonProbRule& r : t.rules)
    t.sig->symbol_mut(r.lhs.sym()).kind = SymbolKind::Defined;
  return t;
}

std::vector<DependencyPair> dependency_pairs(const Trs& r) {
  Signature& sig = *r.sig;
  std::vector<DependencyPair> out;
  for (size_t ri = 0; ri < r.rules.size(); ++ri) {
    std::set<Term> seen;  // Sub_D is a set, not a multiset
    for (const auto& [pos, sub] : subterms(r.rules[ri].rhs)) {
      if (sub.is_var() || sig.symbol(sub.sym()).kind != SymbolKind::Defined) continue;
      if (!seen.insert(sub).second) continue;
      out.push_back(DependencyPair{sharp(r.rules[ri].lhs, sig), sharp(sub, sig), ri, pos});
    }
  }
  return out;
}

bool estimated_edge(const Term& from_lhs, const Term& payload, const Term& to_lhs,
                    const std::vector<Term>& np_lhss, const std::vector<Term>& nf_lhss) {
  Term capped = icap(payload, np_lhss, &from_lhs);
  std::map<int, int> ren;
  Term to_renamed = rename_apart(to_lhs, Signature::kFreshVarBase + 1000000, ren);
  auto mgu = unify(capped, to_renamed);
  if (!mgu) return false;
  Term from_inst = apply_subst(from_lhs, *mgu);
  Term to_inst = apply_subst(to_renamed, *mgu);
  return is_normal_form(from_inst, nf_lhss) && is_normal_form(to_inst, nf_lhss);
}

std::vector<std::pair<size_t, size_t>> estimate_dep_graph(const std::vector<DependencyPair>& d,
                                                          const Trs& r) {
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = 0; j < d.size(); ++j)
      if (estimated_edge(d[i].lhs, d[i].rhs, d[j].lhs, r.lhss, r.lhss))
        edges.emplace_back(i, j);
  return edges;
}

std::vector<std::vector<size_t>> scc_split(size_t n,
                                           const std::vector<std::pair<size_t, size_t>>& edges) {
  // Tarjan
  std::vector<std::vector<size_t>> adj(n);
  for (auto& [a, b] : edges) adj[a].push_back(b);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> onstack(n, 0);
  std::vector<size_t> stack;
  std::vector<std::vector<size_t>> comps;
  int counter = 0;
  std::function<void(size_t)> strongconnect = [&](size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onstack[v] = 1;
    for (size_t w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onstack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<size_t> comp;
      for (;;) {
        size_t w = stack.back();
        stack.pop_back();
        onstack[w] = 0;
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (size_t v = 0; v < n; ++v)
    if (index[v] < 0) strongconnect(v);
  // keep only maximal cycles: singleton components need a self-edge
  std::set<std::pair<size_t, size_t>> eset(edges.begin(), edges.end());
  std::vector<std::vector<size_t>> out;
  for (auto& c : comps) {
    if (c.size() == 1 && !eset.count({c[0], c[0]})) continue;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<std::vector<size_t>> scc_processor(const ClassicDPProblem& p) {
  return scc_split(p.pairs.size(), estimate_dep_graph(p.pairs, p.rules));
}

std::vector<size_t> usable_rules(const std::vector<DependencyPair>& d, const Trs& r) {
  std::set<int> seen_syms;
  std::vector<Term> work;
  for (const DependencyPair& p : d) work.push_back(p.rhs);
  auto consider = [&](const Term& t, auto&& self, std::vector<Term>& queue) -> void {
    if (t.is_var()) return;
    if (seen_syms.insert(t.sym()).second) {
      for (const NonProbRule& rule : r.rules)
        if (rule.lhs.sym() == t.sym()) queue.push_back(rule.rhs);
    }
    for (const Term& a : t.args()) self(a, self, queue);
  };
  while (!work.empty()) {
    Term t = work.back();
    work.pop_back();
    consider(t, consider, work);
  }
  std::vector<size_t> out;
  for (size_t i = 0; i < r.rules.size(); ++i)
    if (seen_syms.count(r.rules[i].lhs.sym())) out.push_back(i);
  return out;
}

ConstraintSet classic_rpp_constraints(const ClassicDPProblem& p, DegreeMode degree,
                                      size_t strict_candidate, TemplateBuilder& tb) {
  const Signature& sig = *p.rules.sig;
  for (const NonProbRule& rule : p.rules.rules) {
    tb.ensure_term_symbols(rule.lhs);
    tb.ensure_term_symbols(rule.rhs);
  }
  for (const DependencyPair& pr : p.pairs) {
    tb.ensure_term_symbols(pr.lhs);
    tb.ensure_term_symbols(pr.rhs);
  }
  Interpretation interp = tb.interpretation();
  std::vector<PolyAtom> atoms;
  for (size_t i = 0; i < p.rules.rules.size(); ++i)
    atoms.push_back(PolyAtom{PolyAtom::Geq, interpret(p.rules.rules[i].lhs, interp, sig),
                             interpret(p.rules.rules[i].rhs, interp, sig),
                             "rule " + std::to_string(i + 1) + " weakly decreasing"});
  for (size_t i = 0; i < p.pairs.size(); ++i)
    atoms.push_back(PolyAtom{i == strict_candidate ? PolyAtom::Gt : PolyAtom::Geq,
                             interpret(p.pairs[i].lhs, interp, sig),
                             interpret(p.pairs[i].rhs, interp, sig),
                             "pair " + std::to_string(i + 1) +
                                 (i == strict_candidate ? " strictly" : " weakly") +
                                 " decreasing"});
  return tb.finish_constraints(std::move(atoms), {}, "classic reduction pair processor");
}

std::optional<ClassicRppResult> reduction_pair_processor(const ClassicDPProblem& p,
                                                         const SolverOptions& opts,
                                                         DegreeMode degree,
                                                         unsigned long long* nodes_accum) {
  const Signature& sig = *p.rules.sig;
  if (p.pairs.empty()) return std::nullopt;  // strict subset must be nonempty
  unsigned long long used = 0;  // node_budget is the total over all candidates
  for (size_t cand = 0; cand < p.pairs.size(); ++cand) {
    if (used >= opts.node_budget) break;
    TemplateBuilder tb(sig, degree, /*monotone_strict=*/false, /*com_additive=*/false);
    ConstraintSet cs = classic_rpp_constraints(p, degree, cand, tb);
    SolverOptions so = opts;
    so.node_budget = opts.node_budget - used;
    SolveResult sr = solve_bounded(cs, so);
    used += sr.nodes;
    if (nodes_accum) *nodes_accum += sr.nodes;
    if (sr.status != SolveStatus::Sat) continue;
    Interpretation interp = tb.concretize(sr.assignment);
    // remove every pair the model orients strictly, not just the candidate
    std::vector<size_t> removed;
    for (size_t i = 0; i < p.pairs.size(); ++i)
      if (atom_holds_concrete(PolyAtom{PolyAtom::Gt, interpret(p.pairs[i].lhs, interp, sig),
                                       interpret(p.pairs[i].rhs, interp, sig), ""}))
        removed.push_back(i);
    ClassicRppResult res{std::move(interp), std::move(removed), degree};
    CheckReport rep = check_classic_rpp(p, res.interp, res.removed);
    if (!rep.ok) throw std::logic_error("unchecked classic RPP result: " + rep.failure);
    return res;
  }
  return std::nullopt;
}

CheckReport check_classic_rpp(const ClassicDPProblem& p, const Interpretation& interp,
                              const std::vector<size_t>& removed) {
  const Signature& sig = *p.rules.sig;
  if (removed.empty()) return {false, "no pair removed"};
  for (size_t i = 0; i < p.rules.rules.size(); ++i)
    if (!atom_holds_concrete(PolyAtom{PolyAtom::Geq,
                                      interpret(p.rules.rules[i].lhs, interp, sig),
                                      interpret(p.rules.rules[i].rhs, interp, sig), ""}))
      return {false, "rule " + std::to_string(i + 1) + " not weakly decreasing"};
  std::set<size_t> rem(removed.begin(), removed.end());
  for (size_t i = 0; i < p.pairs.size(); ++i) {
    PolyAtom::Kind k = rem.count(i) ? PolyAtom::Gt : PolyAtom::Geq;
    if (!atom_holds_concrete(PolyAtom{k, interpret(p.pairs[i].lhs, interp, sig),
                                      interpret(p.pairs[i].rhs, interp, sig), ""}))
      return {false, "pair " + std::to_string(i + 1) + " fails its decrease condition"};
  }
  return {};
}

namespace {

struct ClassicDriver {
  const ProveOptions& opts;
  bool budget_hit = false;
  unsigned long long nodes_used = 0;

  bool deadline_passed() const {
    return opts.solver.deadline && std::chrono::steady_clock::now() > *opts.solver.deadline;
  }
  unsigned long long nodes_left() const {
    return opts.solver.node_budget > nodes_used ? opts.solver.node_budget - nodes_used : 0;
  }

  bool solve(const ClassicDPProblem& prob, ClassicNode& node, std::set<std::string>& seen) {
    // dependency graph / SCC split
    auto sccs = scc_processor(prob);
    bool whole = sccs.size() == 1 && sccs[0].size() == prob.pairs.size();
    if (!whole) {
      node.processor = "classic-dependency-graph";
      bool all = true;
      for (const auto& scc : sccs) {
        ClassicDPProblem sub;
        for (size_t i : scc) sub.pairs.push_back(prob.pairs[i]);
        sub.rules = prob.rules;
        ClassicNode child;
        child.scc_or_removed = scc;
        if (!solve(sub, child, seen)) all = false;
        node.children.push_back(std::move(child));
        if (!all) return false;
      }
      return all;
    }
    // one SCC: usable rules, then the reduction pair processor
    std::vector<size_t> ur = usable_rules(prob.pairs, prob.rules);
    if (ur.size() < prob.rules.rules.size()) {
      node.processor = "classic-usable-rules";
      node.scc_or_removed = ur;
      ClassicDPProblem sub;
      sub.pairs = prob.pairs;
      std::vector<NonProbRule> kept;
      for (size_t i : ur) kept.push_back(prob.rules.rules[i]);
      sub.rules = Trs::from(prob.rules.sig, std::move(kept));
      ClassicNode child;
      bool ok = solve(sub, child, seen);
      node.children.push_back(std::move(child));
      return ok;
    }
    std::string fp = fingerprint(prob);
    if (!seen.insert(fp).second) return false;  // repeated problem: give up on branch
    for (DegreeMode deg : degree_ladder()) {
      if (deadline_passed() || nodes_left() == 0) break;
      SolverOptions so = opts.solver;
      so.node_budget = std::min<unsigned long long>(std::min(so.node_budget, opts.attempt_budget),
                                                    std::max<unsigned long long>(nodes_left(), 1));
      if (opts.emit_constraints && !prob.pairs.empty()) {
        TemplateBuilder tb(*prob.rules.sig, deg, false, false);
        opts.emit_constraints("classic-rpp", classic_rpp_constraints(prob, deg, 0, tb));
      }
      auto rpp = reduction_pair_processor(prob, so, deg, &nodes_used);
      if (!rpp) continue;
      node.processor = "classic-reduction-pair";
      node.scc_or_removed = rpp->removed;
      node.interp = rpp->interp;
      node.degree = deg;
      ClassicDPProblem rest;
      std::set<size_t> rem(rpp->removed.begin(), rpp->removed.end());
      for (size_t i = 0; i < prob.pairs.size(); ++i)
        if (!rem.count(i)) rest.pairs.push_back(prob.pairs[i]);
      rest.rules = prob.rules;
      ClassicNode child;
      bool ok = rest.pairs.empty() ? (child.processor = "empty", true)
                                   : solve(rest, child, seen);
      node.children.push_back(std::move(child));
      seen.erase(fp);
      return ok;
    }
    seen.erase(fp);
    budget_hit = true;  // may also be genuine Unsat; verdict stays Unknown
    return false;
  }

  std::vector<DegreeMode> degree_ladder() const {
    if (opts.degree == DegreeMode::Multilinear || !opts.escalate_degree)
      return {opts.degree};
    return {DegreeMode::Linear, DegreeMode::Multilinear};
  }

  static std::string fingerprint(const ClassicDPProblem& prob) {
    std::ostringstream os;
    for (const DependencyPair& p : prob.pairs)
      os << print_pair(p, *prob.rules.sig) << ";";
    os << "|";
    for (const NonProbRule& r : prob.rules.rules)
      os << term_str(r.lhs, *prob.rules.sig) << "->" << term_str(r.rhs, *prob.rules.sig) << ";";
    return os.str();
  }
};

}  // namespace

ClassicOutcome prove_iterm(const Trs& r, const ProveOptions& opts) {
  return prove_iterm_problem(ClassicDPProblem{dependency_pairs(r), r}, opts);
}

ClassicOutcome prove_iterm_problem(const ClassicDPProblem& p, const ProveOptions& opts) {
  ClassicOutcome out;
  if (p.pairs.empty()) {
    out.proved = true;
    out.root.processor = "empty";
    return out;
  }
  ClassicDriver driver{opts};
  std::set<std::string> seen;
  out.proved = driver.solve(p, out.root, seen);
  if (!out.proved) out.note = "no proof found";
  return out;
}

std::string print_pair(const DependencyPair& p, const Signature& sig) {
  return term_str(p.lhs, sig) + " -> " + term_str(p.rhs, sig);
}

std::string classic_graph_dot(const std::vector<DependencyPair>& d, const Trs& r) {
  std::ostringstream os;
  os << "digraph dependency_graph {\n";
  for (size_t i = 0; i < d.size(); ++i)
    os << "  p" << i + 1 << " [label=\"(" << i + 1 << ") " << print_pair(d[i], *r.sig) << "\"];\n";
  for (auto& [a, b] : estimate_dep_graph(d, r))
    os << "  p" << a + 1 << " -> p" << b + 1 << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ptast
