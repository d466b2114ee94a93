#pragma once

#include <memory>
#include <optional>

#include "direct.hpp"
#include "ptrs.hpp"
#include "solver.hpp"

namespace ptast {

// Non-probabilistic TRS view used by the classic framework.
struct Trs {
  std::shared_ptr<Signature> sig;
  std::vector<NonProbRule> rules;
  std::vector<Term> lhss;

  // Plain view; symbol kinds stay as they are (rule subsets built by
  // processors must not disturb the shared signature).
  static Trs from(std::shared_ptr<Signature> sig, std::vector<NonProbRule> rules);
  // Additionally classifies defined/constructor symbols from the rule roots;
  // only for standalone systems, required before dependency_pairs.
  static Trs from_classified(std::shared_ptr<Signature> sig, std::vector<NonProbRule> rules);
  bool in_normal_form(const Term& t) const { return is_normal_form(t, lhss); }
};

struct DependencyPair {
  Term lhs;  // tuple-symbol root
  Term rhs;  // tuple-symbol root
  size_t rule_index;
  Position origin;
};

struct ClassicDPProblem {
  std::vector<DependencyPair> pairs;
  Trs rules;
};

std::vector<DependencyPair> dependency_pairs(const Trs& r);

// Shared reachability estimation: does an instance of `payload` possibly
// rewrite (innermost, w.r.t. the rules behind np_lhss) to an instance of
// to_lhs, with both instantiated left-hand sides in normal form w.r.t.
// nf_lhss? icap abstraction plus a syntactic normal-form filter on the
// computed unifier; sound over-approximation.
bool estimated_edge(const Term& from_lhs, const Term& payload, const Term& to_lhs,
                    const std::vector<Term>& np_lhss, const std::vector<Term>& nf_lhss);

// Innermost dependency graph over-approximation (icap + syntactic NF filter).
std::vector<std::pair<size_t, size_t>> estimate_dep_graph(const std::vector<DependencyPair>& d,
                                                          const Trs& r);

// SCCs as maximal cycles (a single node only with a self-edge), ordered by
// least pair index.
std::vector<std::vector<size_t>> scc_split(size_t n,
                                           const std::vector<std::pair<size_t, size_t>>& edges);

std::vector<std::vector<size_t>> scc_processor(const ClassicDPProblem& p);

// Least fixpoint of the usable-rules recursion over all pair right-hand sides;
// returns indices into r.rules in source order.
std::vector<size_t> usable_rules(const std::vector<DependencyPair>& d, const Trs& r);

struct ClassicRppResult {
  Interpretation interp;
  std::vector<size_t> removed;  // strictly decreasing pairs
  DegreeMode degree = DegreeMode::Linear;
};

// Weakly monotonic reduction pair processor: all rules and pairs weakly
// decreasing, a nonempty strict subset removed (maximal for the found model).
std::optional<ClassicRppResult> reduction_pair_processor(
    const ClassicDPProblem& p, const SolverOptions& opts, DegreeMode degree = DegreeMode::Linear,
    unsigned long long* nodes_accum = nullptr);

ConstraintSet classic_rpp_constraints(const ClassicDPProblem& p, DegreeMode degree,
                                      size_t strict_candidate, TemplateBuilder& tb);

struct ClassicNode {
  std::string processor;
  std::vector<size_t> scc_or_removed;  // SCC pair indices / removed pairs / kept rules
  std::optional<Interpretation> interp;
  DegreeMode degree = DegreeMode::Linear;
  std::vector<ClassicNode> children;
};

struct ClassicOutcome {
  bool proved = false;
  ClassicNode root;
  std::string note;  // budget exhaustion etc.
};

struct ProveOptions {
  SolverOptions solver;
  DegreeMode degree = DegreeMode::Linear;
  bool escalate_degree = true;  // retry failed reduction-pair stages multilinearly
  unsigned long long attempt_budget = 400000;  // per solver attempt, doubled on retry rounds
  std::function<void(const std::string&, const ConstraintSet&)> emit_constraints;
};

ClassicOutcome prove_iterm(const Trs& r, const ProveOptions& opts);

// Entry point for problems whose pairs are given directly (the probability
// removal processor hands over np(P) as the pair set).
ClassicOutcome prove_iterm_problem(const ClassicDPProblem& p, const ProveOptions& opts);

// Certificate replay for one reduction-pair stage.
CheckReport check_classic_rpp(const ClassicDPProblem& p, const Interpretation& interp,
                              const std::vector<size_t>& removed);

std::string classic_graph_dot(const std::vector<DependencyPair>& d, const Trs& r);
std::string print_pair(const DependencyPair& p, const Signature& sig);

}  // namespace ptast
