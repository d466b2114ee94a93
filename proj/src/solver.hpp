#pragma once

#include <chrono>
#include <optional>

#include "poly.hpp"

namespace ptast {

struct SolverOptions {
  long long coeff_bound = 2;
  unsigned long long node_budget = 10000000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SolveStatus { Sat, Unsat, Budget };

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::vector<long long> assignment;   // meaningful when Sat
  std::vector<size_t> chosen_alt;      // chosen alternative per group when Sat
  unsigned long long nodes = 0;
};

// Finite-domain search over unknowns in [lo, coeff_bound], deterministic
// depth-first in unknown index order with ascending values, so a Sat result
// carries the lexicographically least model. Pruning is interval-based and
// sound. Disjunction groups are satisfied by at least one alternative;
// a group whose alternatives are all interval-infeasible prunes the branch.
SolveResult solve_bounded(const ConstraintSet& cs, const SolverOptions& opts);

// Solver node budget override from the environment (PTAST_NODE_BUDGET).
unsigned long long default_node_budget();

}  // namespace ptast
