#pragma once

#include <functional>
#include <optional>

#include "dtuple.hpp"
#include "ptrs.hpp"

namespace ptast {

struct RedexDescriptor {
  Position position;
  size_t rule_index;
  Substitution subst;
};

struct rewrite_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All innermost redexes of t, leftmost-first, rules in source order at equal
// positions. Empty iff t is a normal form.
std::vector<RedexDescriptor> innermost_redexes(const Term& t, const PTRS& r);

// One rewrite step at the given redex; k branches with the rule's probabilities.
MultiDistribution<Term> step(const Term& t, const RedexDescriptor& d, const PTRS& r);

enum class LiftStrategy { LeftmostInnermost, RightmostInnermost };

struct LiftOptions {
  size_t max_entries = 1000000;
  LiftStrategy strategy = LiftStrategy::LeftmostInnermost;
};

// Exact normal-form mass |mu_0| ... |mu_depth| under the deterministic
// strategy: every non-normal entry does one step per round (first matching
// rule at the chosen redex), normal entries persist. Entries holding equal
// terms are merged internally; they evolve identically under a deterministic
// strategy, so every |mu_n| is unchanged. Throws resource_error beyond
// max_entries.
std::vector<Rational> lift_exact(const Term& t0, const PTRS& r, size_t depth,
                                 const LiftOptions& opts = {});

// Reference lifting that keeps the full multiset per round (no merging);
// test oracle for small depths.
std::vector<MultiDistribution<Term>> lift_states(const Term& t0, const PTRS& r, size_t depth,
                                                 size_t max_entries = 100000);

struct McResult {
  size_t hits = 0;
  size_t samples = 0;
  double estimate() const { return samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0; }
};

// Monte-Carlo estimate of the probability of reaching a normal form within
// max_steps. Redex/rule choice uniform over descriptors, branch choice per
// rule probabilities. Deterministic for a fixed seed: sample i uses a stream
// derived from (seed, i).
McResult mc_estimate(const Term& t0, const PTRS& r, size_t max_steps, size_t samples,
                     uint64_t seed);

// --- chain-step relations on compound terms --------------------------------

struct MirrorChoice {
  bool rewrite = false;
  Position at;  // meaningful when rewrite is true

  static MirrorChoice keep() { return {}; }
  static MirrorChoice rewrite_at(Position p) { return {true, std::move(p)}; }
};

// P-step: rewrites argument i of the normalized compound term a with the
// coupled DT (s_i = lhs#*sigma, in S-normal form); every other argument may
// mirror the proj2 rule at a position holding the same redex instance,
// provided that rule is in S. Results are normalized.
MultiDistribution<Term> pptrs_step(const Term& a, size_t i, const CoupledDT& dt,
                                   const Substitution& sigma,
                                   const std::vector<MirrorChoice>& mirror, const PTRS& s);

// S-step: innermost rewrite of argument i at position pi with an S-rule,
// mirrored the same way.
MultiDistribution<Term> s_step(const Term& a, size_t i, const Position& pi, size_t rule_index,
                               const std::vector<MirrorChoice>& mirror, const PTRS& s);

struct ChainAction {
  enum Kind { PStep, SStep } kind;
  size_t arg_index = 0;
  size_t dt_index = 0;     // PStep
  Position position;       // SStep
  size_t rule_index = 0;   // SStep
  std::vector<MirrorChoice> mirror;
};

using ChainPolicy = std::function<std::optional<ChainAction>(const Term&)>;

// True when some P-step or S-step applies to the normalized compound term.
bool chain_step_applicable(const Term& a, const std::vector<CoupledDT>& p, const PTRS& s);

// Expands the chain tree to the given depth under a deterministic policy and
// returns the exact probability mass on true leaves (nodes where no P- or
// S-step applies at all).
Rational chain_leaf_mass(const std::vector<CoupledDT>& p, const PTRS& s, const Term& root,
                         const ChainPolicy& policy, size_t depth);

}  // namespace ptast
