#pragma once

#include <string>
#include <vector>

#include "ptrs.hpp"

namespace ptast {

// --- compound terms -------------------------------------------------------

// Content multiset of a term: compound roots are flattened away.
std::vector<Term> cont(const Term& t, const Signature& sig);

// Normalization c_n(t1,...,tn) of a compound-rooted term, arguments in
// left-to-right discovery order. Idempotent.
Term normalize_compound(const Term& t, Signature& sig);

// cont-multiset equality (the ~~ relation on compound terms).
bool cont_equal(const Term& a, const Term& b, const Signature& sig);

// Marks the root with the tuple symbol: t = f(t1..tn) becomes f#(t1..tn).
Term sharp(const Term& t, Signature& sig);

// dp(r) = c_n(t1#, ..., tn#) over the multiset of defined-rooted subterms of
// r, ordered by lexicographic position.
Term dp_transform(const Term& r, Signature& sig);

// --- coupled dependency tuples --------------------------------------------

struct DTBranch {
  Term d;  // normalized compound term over tuple symbols
  Term r;  // plain term, same as the originating rule branch
};

struct CoupledDT {
  Term lhs_sharp;
  Term lhs;
  MultiDistribution<DTBranch> rhs;

  ProbRule proj2() const {
    std::vector<std::pair<Rational, Term>> es;
    for (const auto& [p, br] : rhs.entries()) es.emplace_back(p, br.r);
    return ProbRule{lhs, MultiDistribution<Term>(std::move(es))};
  }
};

// DT(R): one coupled dependency tuple per rule, in rule order.
std::vector<CoupledDT> dtuples(const PTRS& r);

struct ProbDPProblem {
  std::vector<CoupledDT> pairs;  // P
  PTRS rules;                    // S
};

std::string print_dtuple(const CoupledDT& dt, const Signature& sig);
std::string print_problem(const ProbDPProblem& p);

}  // namespace ptast
