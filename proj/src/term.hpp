#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptast {

enum class SymbolKind { Constructor, Defined, Tuple, Compound };

struct SymbolInfo {
  std::string name;
  int arity = 0;
  SymbolKind kind = SymbolKind::Constructor;
  int tuple_of = -1;  // base symbol id for tuple symbols, tuple id for defined ones
};

// Function symbols and user variable names of one rewrite system share a
// signature. Fresh variables created by operations like icap live above
// kFreshVarBase and need no registration, so all term operations stay pure.
class Signature {
 public:
  static constexpr int kFreshVarBase = 1 << 30;

  int add_symbol(const std::string& name, int arity, SymbolKind kind);
  int find_symbol(const std::string& name) const;  // -1 when absent
  int symbol_or_add(const std::string& name, int arity, SymbolKind kind);
  const SymbolInfo& symbol(int id) const { return syms_.at(static_cast<size_t>(id)); }
  SymbolInfo& symbol_mut(int id) { return syms_.at(static_cast<size_t>(id)); }
  size_t symbol_count() const { return syms_.size(); }

  int add_var(const std::string& name);
  int find_var(const std::string& name) const;
  std::string var_name(int v) const;
  size_t var_count() const { return vars_.size(); }

  // Tuple symbol f# for a defined symbol, created on first use.
  int tuple_symbol(int base_id);
  // Variadic compound symbol c_n.
  int compound_symbol(int arity);
  bool is_compound(int id) const { return symbol(id).kind == SymbolKind::Compound; }
  bool is_tuple(int id) const { return symbol(id).kind == SymbolKind::Tuple; }

  // Display name honoring the uppercase convention for tuple symbols.
  std::string display_name(int id) const;

 private:
  std::vector<SymbolInfo> syms_;
  std::map<std::string, int> by_name_;
  std::vector<std::string> vars_;
  std::map<std::string, int> var_by_name_;
  std::map<int, int> compound_by_arity_;
};

class Term;
using Terms = std::vector<Term>;

// Immutable first-order term. Structural equality, precomputed hash.
class Term {
 public:
  Term() = default;
  static Term var(int v);
  static Term app(int sym, Terms args);

  bool is_var() const { return node_->sym < 0; }
  int var_id() const { return -node_->sym - 1; }
  int sym() const { return node_->sym; }
  const Terms& args() const { return node_->args; }
  size_t hash() const { return node_->hash; }
  bool valid() const { return node_ != nullptr; }

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;  // arbitrary total order for maps

  size_t size() const;  // node count

 private:
  struct Node {
    int sym;  // >= 0: symbol id, < 0: -(var id)-1
    Terms args;
    size_t hash;
  };
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  size_t operator()(const Term& t) const { return t.hash(); }
};

// 1-based child indices; the empty path is the root.
using Position = std::vector<int>;

bool position_less(const Position& a, const Position& b);  // lexicographic

using Substitution = std::map<int, Term>;

Term apply_subst(const Term& t, const Substitution& s);

std::vector<int> term_vars(const Term& t);  // each variable once, first-occurrence order
bool contains_var(const Term& t, int v);

// First-order matching: sigma with pattern*sigma == subject.
std::optional<Substitution> match(const Term& pattern, const Term& subject);
// Robinson unification with occurs check; the result is idempotent.
std::optional<Substitution> unify(const Term& s, const Term& t);

struct position_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Term subterm_at(const Term& t, const Position& pos);
Term replace_at(const Term& t, const Position& pos, const Term& u);

// All (position, subterm) pairs in preorder (leftmost-first) traversal.
std::vector<std::pair<Position, Term>> subterms(const Term& t);

// True iff no subterm of t matches any pattern in lhss.
bool is_normal_form(const Term& t, const std::vector<Term>& lhss);

// Innermost-cap abstraction: every subterm whose capped form unifies with a
// left-hand side is replaced by a fresh variable. Subterms that occur
// syntactically in `protect` stand for normal forms and are kept.
Term icap(const Term& t, const std::vector<Term>& rules_lhs, const Term* protect = nullptr);

// Renames every variable of t to a fresh one above `offset`; used to make
// rule pairs variable-disjoint before unification.
Term rename_apart(const Term& t, int offset, std::map<int, int>& renaming);

std::string term_str(const Term& t, const Signature& sig);
}  // namespace ptast
