#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "multidist.hpp"
#include "term.hpp"

namespace ptast {

struct ProbRule {
  Term lhs;
  MultiDistribution<Term> rhs;

  bool deterministic() const { return rhs.size() == 1; }
  bool operator==(const ProbRule& o) const {
    if (!(lhs == o.lhs) || rhs.size() != o.rhs.size()) return false;
    for (size_t i = 0; i < rhs.size(); ++i)
      if (rhs.entries()[i].first != o.rhs.entries()[i].first ||
          !(rhs.entries()[i].second == o.rhs.entries()[i].second))
        return false;
    return true;
  }
};

struct NonProbRule {
  Term lhs;
  Term rhs;
};

// A probabilistic term rewrite system together with its signature. Symbol
// kinds are computed from the rules, never user-declared.
class PTRS {
 public:
  PTRS() : sig_(std::make_shared<Signature>()) {}
  // classify recomputes defined/constructor kinds from the rule roots; rule
  // subsets built by processors must pass false to keep the shared signature
  // intact.
  PTRS(std::shared_ptr<Signature> sig, std::vector<ProbRule> rules, std::string name = "",
       bool classify = true);

  const std::vector<ProbRule>& rules() const { return rules_; }
  const Signature& sig() const { return *sig_; }
  // Symbol creation is append-only, so handing out a mutable signature from a
  // const system is safe; existing terms never change meaning.
  Signature& sig_mut() const { return *sig_; }
  std::shared_ptr<Signature> sig_ptr() const { return sig_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const std::vector<Term>& lhss() const { return lhss_; }
  std::vector<int> defined_symbols() const;
  std::vector<int> constructor_symbols() const;
  bool deterministic() const;

  bool in_normal_form(const Term& t) const { return is_normal_form(t, lhss_); }

  // Keeps the signature but swaps the rule set (used by processors).
  PTRS with_rules(std::vector<ProbRule> rules) const;

 private:
  std::shared_ptr<Signature> sig_;
  std::vector<ProbRule> rules_;
  std::vector<Term> lhss_;
  std::string name_;
};

// Non-probabilistic variant: one rule per support element, in source order.
std::vector<NonProbRule> np(const PTRS& s);
std::vector<NonProbRule> np_rules(const std::vector<ProbRule>& rules);

struct parse_error : std::runtime_error {
  int line;
  int column;
  parse_error(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
        line(l),
        column(c) {}
};

// Input format: optional '(VAR x y ...)' block, then a '(RULES ...)' block,
// '#' line comments. Deterministic 'l -> r' abbreviates 'l -> {1 : r}'.
PTRS parse_ptrs(const std::string& text, const std::string& name = "");

// Parses a term over an existing signature. Unknown nullary symbols are
// added as fresh constructor constants (start terms may use constants the
// rules never mention); anything else unknown is an error.
Term parse_term_over(const std::string& text, Signature& sig);

std::string print_rule(const ProbRule& r, const Signature& sig);
std::string print_ptrs(const PTRS& r);

}  // namespace ptast
