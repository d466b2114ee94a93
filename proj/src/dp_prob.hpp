#pragma once

#include <optional>

#include "dp_classic.hpp"
#include "dtuple.hpp"

namespace ptast {

std::vector<std::pair<size_t, size_t>> prob_dep_graph(const std::vector<CoupledDT>& p,
                                                      const PTRS& s);

// One sub-problem per SCC (maximal cycle), ordered by least DT index.
std::vector<std::vector<size_t>> prob_scc_processor(const ProbDPProblem& prob);

// Removes non-usable terms from the tuple sides of every DT.
std::vector<CoupledDT> usable_terms_processor(const std::vector<CoupledDT>& p, const PTRS& s);

// Indices of the usable rules of S (least fixpoint over all tuple sides).
std::vector<size_t> prob_usable_rules(const std::vector<CoupledDT>& p, const PTRS& s);

struct ProbRppResult {
  Interpretation interp;  // weakly monotonic, multilinear, Com-additive
  std::vector<size_t> removed;
  DegreeMode degree = DegreeMode::Linear;
};

// Probabilistic reduction pair processor. budget_limited reports whether some
// solver attempt ran out of nodes (so a retry with a larger budget may help);
// nodes_accum accumulates solver nodes across the internal attempts.
std::optional<ProbRppResult> prob_reduction_pair_processor(const ProbDPProblem& prob,
                                                           const SolverOptions& opts,
                                                           DegreeMode degree,
                                                           bool* budget_limited = nullptr,
                                                           unsigned long long* nodes_accum = nullptr);

ConstraintSet prob_rpp_constraints(const ProbDPProblem& prob, DegreeMode degree,
                                   size_t strict_dt, size_t strict_branch, TemplateBuilder& tb);

CheckReport check_prob_rpp(const ProbDPProblem& prob, const Interpretation& interp,
                           const std::vector<size_t>& removed);

// Applicable when every DT and every rule is deterministic; yields the
// equivalent classic DP problem (np(P), np(S)).
std::optional<ClassicDPProblem> probability_removal(const ProbDPProblem& prob);

struct ProbNode {
  std::string processor;  // dependency-graph | usable-terms | usable-rules |
                          // probability-removal | reduction-pair | empty | open
  std::vector<std::vector<size_t>> sccs;       // dependency-graph
  std::vector<size_t> indices;                 // removed DTs / kept rules
  std::optional<Interpretation> interp;        // reduction-pair
  DegreeMode degree = DegreeMode::Linear;
  std::optional<ClassicOutcome> classic;       // probability-removal
  std::vector<ProbNode> children;
  std::string note;
};

struct ProbOutcome {
  bool proved = false;
  ProbNode root;
  std::vector<std::string> frontier;  // unsolved problems (Unknown trace)
  std::string note;
};

ProbOutcome prove_iast(const PTRS& r, const ProveOptions& opts);

// Driver entry on an explicit problem (used by tests and certificate replay).
ProbOutcome prove_iast_problem(const ProbDPProblem& prob, const ProveOptions& opts);

std::string prob_graph_dot(const std::vector<CoupledDT>& p, const PTRS& s);

}  // namespace ptast
