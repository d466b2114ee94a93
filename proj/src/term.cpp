#include "term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ptast {

int Signature::add_symbol(const std::string& name, int arity, SymbolKind kind) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) {
    const SymbolInfo& s = syms_[static_cast<size_t>(it->second)];
    if (s.arity != arity)
      throw std::invalid_argument("symbol '" + name + "' redeclared with arity " +
                                  std::to_string(arity) + " (was " + std::to_string(s.arity) + ")");
    return it->second;
  }
  int id = static_cast<int>(syms_.size());
  syms_.push_back(SymbolInfo{name, arity, kind, -1});
  by_name_[name] = id;
  return id;
}

int Signature::find_symbol(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

int Signature::symbol_or_add(const std::string& name, int arity, SymbolKind kind) {
  return add_symbol(name, arity, kind);
}

int Signature::add_var(const std::string& name) {
  auto it = var_by_name_.find(name);
  if (it != var_by_name_.end()) return it->second;
  int id = static_cast<int>(vars_.size());
  vars_.push_back(name);
  var_by_name_[name] = id;
  return id;
}

int Signature::find_var(const std::string& name) const {
  auto it = var_by_name_.find(name);
  return it == var_by_name_.end() ? -1 : it->second;
}

std::string Signature::var_name(int v) const {
  if (v >= kFreshVarBase) return "_v" + std::to_string(v - kFreshVarBase);
  return vars_.at(static_cast<size_t>(v));
}

int Signature::tuple_symbol(int base_id) {
  SymbolInfo& base = syms_.at(static_cast<size_t>(base_id));
  if (base.tuple_of >= 0) return base.tuple_of;
  int id = add_symbol(base.name + "#", base.arity, SymbolKind::Tuple);
  syms_[static_cast<size_t>(id)].tuple_of = base_id;
  syms_[static_cast<size_t>(base_id)].tuple_of = id;
  return id;
}

int Signature::compound_symbol(int arity) {
  auto it = compound_by_arity_.find(arity);
  if (it != compound_by_arity_.end()) return it->second;
  int id = add_symbol("c" + std::to_string(arity), arity, SymbolKind::Compound);
  compound_by_arity_[arity] = id;
  return id;
}

std::string Signature::display_name(int id) const {
  const SymbolInfo& s = symbol(id);
  if (s.kind != SymbolKind::Tuple) return s.name;
  std::string base = s.name.substr(0, s.name.size() - 1);  // strip '#'
  std::string up = base;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == base) return s.name;  // name already uppercase, keep f# form
  if (by_name_.count(up)) return s.name;
  // ambiguous with another tuple symbol's uppercase form?
  for (size_t i = 0; i < syms_.size(); ++i) {
    if (static_cast<int>(i) == id || syms_[i].kind != SymbolKind::Tuple) continue;
    std::string ob = syms_[i].name.substr(0, syms_[i].name.size() - 1);
    std::transform(ob.begin(), ob.end(), ob.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (ob == up) return s.name;
  }
  return up;
}

Term Term::var(int v) {
  Term t;
  size_t h = std::hash<int>()(-v - 1) * 0x9e3779b97f4a7c15ull + 0x12345;
  t.node_ = std::make_shared<const Node>(Node{-v - 1, {}, h});
  return t;
}

Term Term::app(int sym, Terms args) {
  Term t;
  size_t h = std::hash<int>()(sym);
  for (const Term& a : args) h = h * 0x100000001b3ull ^ a.hash();
  t.node_ = std::make_shared<const Node>(Node{sym, std::move(args), h});
  return t;
}

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash || node_->sym != o.node_->sym ||
      node_->args.size() != o.node_->args.size())
    return false;
  for (size_t i = 0; i < node_->args.size(); ++i)
    if (!(node_->args[i] == o.node_->args[i])) return false;
  return true;
}

bool Term::operator<(const Term& o) const {
  if (node_ == o.node_) return false;
  if (node_->sym != o.node_->sym) return node_->sym < o.node_->sym;
  if (node_->args.size() != o.node_->args.size()) return node_->args.size() < o.node_->args.size();
  for (size_t i = 0; i < node_->args.size(); ++i) {
    if (node_->args[i] < o.node_->args[i]) return true;
    if (o.node_->args[i] < node_->args[i]) return false;
  }
  return false;
}

size_t Term::size() const {
  size_t n = 1;
  for (const Term& a : args()) n += a.size();
  return n;
}

bool position_less(const Position& a, const Position& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Term apply_subst(const Term& t, const Substitution& s) {
  if (!t.valid()) return t;
  if (t.is_var()) {
    auto it = s.find(t.var_id());
    return it == s.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  Terms as;
  as.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    Term na = apply_subst(a, s);
    changed = changed || !(na == a);
    as.push_back(std::move(na));
  }
  return changed ? Term::app(t.sym(), std::move(as)) : t;
}

static void collect_vars(const Term& t, std::vector<int>& out, std::vector<char>& seen_small,
                         std::map<int, char>& seen_big) {
  if (t.is_var()) {
    int v = t.var_id();
    if (v < 4096) {
      if (seen_small.size() <= static_cast<size_t>(v)) seen_small.resize(static_cast<size_t>(v) + 1, 0);
      if (seen_small[static_cast<size_t>(v)]) return;
      seen_small[static_cast<size_t>(v)] = 1;
    } else {
      if (seen_big[v]) return;
      seen_big[v] = 1;
    }
    out.push_back(v);
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out, seen_small, seen_big);
}

std::vector<int> term_vars(const Term& t) {
  std::vector<int> out;
  std::vector<char> s;
  std::map<int, char> b;
  collect_vars(t, out, s, b);
  return out;
}

bool contains_var(const Term& t, int v) {
  if (t.is_var()) return t.var_id() == v;
  for (const Term& a : t.args())
    if (contains_var(a, v)) return true;
  return false;
}

static bool match_rec(const Term& pat, const Term& sub, Substitution& out) {
  if (pat.is_var()) {
    auto it = out.find(pat.var_id());
    if (it != out.end()) return it->second == sub;
    out.emplace(pat.var_id(), sub);
    return true;
  }
  if (sub.is_var() || pat.sym() != sub.sym()) return false;
  for (size_t i = 0; i < pat.args().size(); ++i)
    if (!match_rec(pat.args()[i], sub.args()[i], out)) return false;
  return true;
}

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution s;
  if (!match_rec(pattern, subject, s)) return std::nullopt;
  return s;
}

// Resolves a term through the accumulated triangular substitution.
static Term walk(Term t, const Substitution& s) {
  while (t.is_var()) {
    auto it = s.find(t.var_id());
    if (it == s.end()) return t;
    t = it->second;
  }
  return t;
}

static bool occurs(const Term& t, int v, const Substitution& s) {
  Term w = walk(t, s);
  if (w.is_var()) return w.var_id() == v;
  for (const Term& a : w.args())
    if (occurs(a, v, s)) return true;
  return false;
}

static bool unify_rec(const Term& a, const Term& b, Substitution& s) {
  Term x = walk(a, s), y = walk(b, s);
  if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) return true;
  if (x.is_var()) {
    if (occurs(y, x.var_id(), s)) return false;
    s.emplace(x.var_id(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(x, y.var_id(), s)) return false;
    s.emplace(y.var_id(), x);
    return true;
  }
  if (x.sym() != y.sym()) return false;
  for (size_t i = 0; i < x.args().size(); ++i)
    if (!unify_rec(x.args()[i], y.args()[i], s)) return false;
  return true;
}

std::optional<Substitution> unify(const Term& s, const Term& t) {
  Substitution tri;
  if (!unify_rec(s, t, tri)) return std::nullopt;
  // Resolve the triangular form into an idempotent substitution.
  Substitution out;
  for (auto& [v, u] : tri) {
    Term r = u;
    for (;;) {
      Term n = apply_subst(r, tri);
      if (n == r) break;
      r = n;
    }
    out.emplace(v, r);
  }
  return out;
}

Term subterm_at(const Term& t, const Position& pos) {
  Term cur = t;
  for (int i : pos) {
    if (cur.is_var() || i < 1 || static_cast<size_t>(i) > cur.args().size())
      throw position_error("invalid position");
    cur = cur.args()[static_cast<size_t>(i - 1)];
  }
  return cur;
}

Term replace_at(const Term& t, const Position& pos, const Term& u) {
  if (pos.empty()) return u;
  if (t.is_var() || pos[0] < 1 || static_cast<size_t>(pos[0]) > t.args().size())
    throw position_error("invalid position");
  Terms as = t.args();
  Position rest(pos.begin() + 1, pos.end());
  as[static_cast<size_t>(pos[0] - 1)] = replace_at(as[static_cast<size_t>(pos[0] - 1)], rest, u);
  return Term::app(t.sym(), std::move(as));
}

static void subterms_rec(const Term& t, Position& cur, std::vector<std::pair<Position, Term>>& out) {
  out.emplace_back(cur, t);
  if (t.is_var()) return;
  for (size_t i = 0; i < t.args().size(); ++i) {
    cur.push_back(static_cast<int>(i + 1));
    subterms_rec(t.args()[i], cur, out);
    cur.pop_back();
  }
}

std::vector<std::pair<Position, Term>> subterms(const Term& t) {
  std::vector<std::pair<Position, Term>> out;
  Position cur;
  subterms_rec(t, cur, out);
  return out;
}

static bool some_lhs_matches(const Term& t, const std::vector<Term>& lhss) {
  for (const Term& l : lhss)
    if (match(l, t)) return true;
  return false;
}

bool is_normal_form(const Term& t, const std::vector<Term>& lhss) {
  if (!t.is_var() && some_lhs_matches(t, lhss)) return false;
  for (const Term& a : t.args())
    if (!is_normal_form(a, lhss)) return false;
  return true;
}

static bool term_occurs_in(const Term& needle, const Term& hay) {
  if (needle == hay) return true;
  for (const Term& a : hay.args())
    if (term_occurs_in(needle, a)) return true;
  return false;
}

static Term icap_rec(const Term& t, const std::vector<Term>& lhss, const Term* protect,
                     int& fresh) {
  if (t.is_var()) return t;
  if (protect && term_occurs_in(t, *protect)) return t;  // instance known to be normal
  Terms as;
  as.reserve(t.args().size());
  for (const Term& a : t.args()) as.push_back(icap_rec(a, lhss, protect, fresh));
  Term capped = Term::app(t.sym(), std::move(as));
  for (const Term& l : lhss) {
    std::map<int, int> ren;
    Term lr = rename_apart(l, Signature::kFreshVarBase + 500000, ren);
    if (unify(capped, lr)) return Term::var(Signature::kFreshVarBase + fresh++);
  }
  return capped;
}

Term icap(const Term& t, const std::vector<Term>& rules_lhs, const Term* protect) {
  int fresh = 0;
  return icap_rec(t, rules_lhs, protect, fresh);
}

Term rename_apart(const Term& t, int offset, std::map<int, int>& renaming) {
  if (t.is_var()) {
    auto it = renaming.find(t.var_id());
    int nv;
    if (it == renaming.end()) {
      nv = offset + static_cast<int>(renaming.size());
      renaming[t.var_id()] = nv;
    } else {
      nv = it->second;
    }
    return Term::var(nv);
  }
  Terms as;
  as.reserve(t.args().size());
  for (const Term& a : t.args()) as.push_back(rename_apart(a, offset, renaming));
  return Term::app(t.sym(), std::move(as));
}

static void term_str_rec(const Term& t, const Signature& sig, std::ostringstream& os) {
  if (t.is_var()) {
    os << sig.var_name(t.var_id());
    return;
  }
  os << sig.display_name(t.sym());
  if (!t.args().empty()) {
    os << "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << ", ";
      term_str_rec(t.args()[i], sig, os);
    }
    os << ")";
  }
}

std::string term_str(const Term& t, const Signature& sig) {
  std::ostringstream os;
  term_str_rec(t, sig, os);
  return os.str();
}

}  // namespace ptast
