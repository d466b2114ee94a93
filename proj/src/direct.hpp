#pragma once

#include <optional>

#include "poly.hpp"
#include "ptrs.hpp"
#include "solver.hpp"

namespace ptast {

struct DirectProof {
  Interpretation interp;            // concrete, monotone, multilinear
  std::vector<size_t> strict_branch;  // per rule: branch with the strict decrease
  DegreeMode degree = DegreeMode::Linear;
};

struct CheckReport {
  bool ok = true;
  std::string failure;  // names the violated rule and condition when !ok
};

// AST criterion for PTRSs: monotone interpretation with, per rule, one
// strictly decreasing branch and a weakly decreasing expected value.
std::optional<DirectProof> prove_ast_direct(const PTRS& r, const SolverOptions& opts,
                                            DegreeMode degree);

// Classic termination: monotone interpretation, every rule strictly decreasing.
std::optional<DirectProof> prove_terminating_classic(const std::vector<NonProbRule>& rules,
                                                     const Signature& sig,
                                                     const SolverOptions& opts,
                                                     DegreeMode degree = DegreeMode::Linear);

// Constraint sets as handed to the solver (also used for SMT export).
ConstraintSet direct_ast_constraints(const PTRS& r, DegreeMode degree, TemplateBuilder& tb);

// Independent re-validation using only interpret and concrete comparisons.
CheckReport check_direct_ast(const PTRS& r, const Interpretation& interp);
CheckReport check_classic_termination(const std::vector<NonProbRule>& rules,
                                      const Signature& sig, const Interpretation& interp);

// Monotone shape check: every argument's linear coefficient >= 1.
bool interpretation_monotone(const Interpretation& interp, const Signature& sig);

}  // namespace ptast
