#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multidist.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace ptast {

// Monomial over solver unknowns: sorted unknown ids, repetition = exponent.
using UnknownMono = std::vector<int>;

// Polynomial in the unknown coefficients with rational constants. Concrete
// values are the special case without unknowns.
class CoeffPoly {
 public:
  CoeffPoly() = default;
  static CoeffPoly constant(Rational c);
  static CoeffPoly unknown(int u);

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  Rational constant_value() const;

  CoeffPoly& operator+=(const CoeffPoly& o);
  CoeffPoly operator+(const CoeffPoly& o) const;
  CoeffPoly operator-(const CoeffPoly& o) const;
  CoeffPoly operator*(const CoeffPoly& o) const;
  CoeffPoly scaled(const Rational& k) const;

  Rational eval(const std::vector<long long>& assignment) const;
  void collect_unknowns(std::vector<char>& present) const;
  const std::map<UnknownMono, Rational>& terms() const { return terms_; }
  bool zero() const { return terms_.empty(); }

  std::string str(const std::vector<std::string>& unknown_names) const;

 private:
  std::map<UnknownMono, Rational> terms_;  // no zero coefficients stored
  void add_term(const UnknownMono& m, const Rational& c);
};

// Monomial over rule variables: sorted var ids, repetition = exponent.
using VarMono = std::vector<int>;

// Polynomial over rule variables whose coefficients are CoeffPoly.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(CoeffPoly c);
  static Polynomial variable(int v);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& k) const;
  Polynomial scaled_by(const CoeffPoly& k) const;

  const std::map<VarMono, CoeffPoly>& terms() const { return terms_; }
  CoeffPoly coefficient(const VarMono& m) const;
  int max_var_exponent() const;

  // Concrete evaluation; every coefficient must be constant.
  Rational eval(const std::map<int, Rational>& var_values) const;

  std::string str(const Signature& sig, const std::vector<std::string>& unknown_names) const;

 private:
  std::map<VarMono, CoeffPoly> terms_;
  void add_term(const VarMono& m, const CoeffPoly& c);
};

// Per-symbol multilinear template: one coefficient per subset of argument
// positions (0-based, strictly ascending). Linear templates use only the
// empty set and singletons.
struct SymbolPoly {
  std::map<std::vector<int>, CoeffPoly> coeffs;

  static SymbolPoly projection(int arg);
  static SymbolPoly constant(Rational c);
  static SymbolPoly additive(int arity);  // x1 + ... + xn
};

struct Interpretation {
  std::map<int, SymbolPoly> symbols;
  bool com_additive = false;  // compound symbols implicitly map to sums

  bool maps(int sym) const { return symbols.count(sym) != 0; }
};

struct interpret_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Homomorphic interpretation of a term. Compound symbols are summed when the
// interpretation is Com-additive.
Polynomial interpret(const Term& t, const Interpretation& interp, const Signature& sig);

// Sum of p_j * interpret(r_j).
Polynomial expected_poly(const MultiDistribution<Term>& mu, const Interpretation& interp,
                         const Signature& sig);

// --- constraints -------------------------------------------------------------

struct PolyAtom {
  enum Kind { Geq, Gt } kind;
  Polynomial lhs, rhs;
  std::string label;
};

struct DisjGroup {
  std::string label;
  std::vector<std::vector<PolyAtom>> alternatives;  // choose exactly one
};

struct ConstraintSet {
  std::vector<PolyAtom> atoms;
  std::vector<DisjGroup> groups;
  size_t unknown_count = 0;
  std::vector<std::string> unknown_names;
  std::vector<long long> domain_lo;  // per-unknown lower bounds (monotonicity)
  std::string source;                // free-form provenance for the SMT header
};

// Absolute-positiveness reduction of one atom: a list of coefficient
// polynomials, each required >= 0, with integer coefficients after clearing
// denominators. Sound but incomplete for polynomial inequalities over the
// naturals.
std::vector<CoeffPoly> atom_conditions(const PolyAtom& atom);

// Concrete check of an atom (all interpretation coefficients constant).
bool atom_holds_concrete(const PolyAtom& atom);

// --- symbolic templates -------------------------------------------------------

enum class DegreeMode { Linear, Multilinear };

class TemplateBuilder {
 public:
  TemplateBuilder(const Signature& sig, DegreeMode degree, bool monotone_strict,
                  bool com_additive);

  // Registers (or reuses) a template for the symbol, creating unknowns.
  void ensure_symbol(int sym);
  void ensure_term_symbols(const Term& t);

  Interpretation interpretation() const { return interp_; }
  ConstraintSet finish_constraints(std::vector<PolyAtom> atoms, std::vector<DisjGroup> groups,
                                   std::string source) const;
  // Concrete interpretation from a solver assignment.
  Interpretation concretize(const std::vector<long long>& assignment) const;

 private:
  const Signature& sig_;
  DegreeMode degree_;
  bool monotone_strict_;
  bool com_additive_;
  Interpretation interp_;
  std::vector<std::string> unknown_names_;
  std::vector<long long> domain_lo_;
};

}  // namespace ptast
