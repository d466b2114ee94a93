#include "poly.hpp"

#include <algorithm>
#include <sstream>

namespace ptast {

CoeffPoly CoeffPoly::constant(Rational c) {
  CoeffPoly p;
  if (c != 0) p.terms_[{}] = std::move(c);
  return p;
}

CoeffPoly CoeffPoly::unknown(int u) {
  CoeffPoly p;
  p.terms_[{u}] = 1;
  return p;
}

Rational CoeffPoly::constant_value() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  throw std::logic_error("coefficient polynomial is not constant");
}

void CoeffPoly::add_term(const UnknownMono& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CoeffPoly& CoeffPoly::operator+=(const CoeffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

CoeffPoly CoeffPoly::operator+(const CoeffPoly& o) const {
  CoeffPoly r = *this;
  r += o;
  return r;
}

CoeffPoly CoeffPoly::operator-(const CoeffPoly& o) const {
  CoeffPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

CoeffPoly CoeffPoly::operator*(const CoeffPoly& o) const {
  CoeffPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      UnknownMono m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      std::sort(m.begin(), m.end());
      r.add_term(m, c1 * c2);
    }
  return r;
}

CoeffPoly CoeffPoly::scaled(const Rational& k) const {
  CoeffPoly r;
  if (k == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c * k;
  return r;
}

Rational CoeffPoly::eval(const std::vector<long long>& assignment) const {
  Rational out = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (int u : m) v *= assignment.at(static_cast<size_t>(u));
    out += v;
  }
  return out;
}

void CoeffPoly::collect_unknowns(std::vector<char>& present) const {
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (int u : m) {
      if (present.size() <= static_cast<size_t>(u)) present.resize(static_cast<size_t>(u) + 1, 0);
      present[static_cast<size_t>(u)] = 1;
    }
  }
}

std::string CoeffPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rat_str(c);
    for (int u : m) os << "*" << names.at(static_cast<size_t>(u));
  }
  return os.str();
}

Polynomial Polynomial::constant(CoeffPoly c) {
  Polynomial p;
  if (!c.zero()) p.terms_[{}] = std::move(c);
  return p;
}

Polynomial Polynomial::variable(int v) {
  Polynomial p;
  p.terms_[{v}] = CoeffPoly::constant(1);
  return p;
}

void Polynomial::add_term(const VarMono& m, const CoeffPoly& c) {
  if (c.zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, CoeffPoly{} - c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) {
      VarMono m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      std::sort(m.begin(), m.end());
      r.add_term(m, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::scaled(const Rational& k) const {
  Polynomial r;
  if (k == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c.scaled(k);
  return r;
}

Polynomial Polynomial::scaled_by(const CoeffPoly& k) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add_term(m, c * k);
  return r;
}

CoeffPoly Polynomial::coefficient(const VarMono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? CoeffPoly{} : it->second;
}

int Polynomial::max_var_exponent() const {
  int mx = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    int run = 1;
    for (size_t i = 1; i <= m.size(); ++i) {
      if (i < m.size() && m[i] == m[i - 1]) {
        ++run;
      } else {
        mx = std::max(mx, run);
        run = 1;
      }
    }
    if (m.empty()) continue;
  }
  return mx;
}

Rational Polynomial::eval(const std::map<int, Rational>& var_values) const {
  Rational out = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c.constant_value();
    for (int var : m) v *= var_values.at(var);
    out += v;
  }
  return out;
}

std::string Polynomial::str(const Signature& sig, const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str(names) << ")";
    for (int v : m) os << "*" << sig.var_name(v);
  }
  return os.str();
}

SymbolPoly SymbolPoly::projection(int arg) {
  SymbolPoly s;
  s.coeffs[{arg}] = CoeffPoly::constant(1);
  return s;
}

SymbolPoly SymbolPoly::constant(Rational c) {
  SymbolPoly s;
  s.coeffs[{}] = CoeffPoly::constant(std::move(c));
  return s;
}

SymbolPoly SymbolPoly::additive(int arity) {
  SymbolPoly s;
  for (int i = 0; i < arity; ++i) s.coeffs[{i}] = CoeffPoly::constant(1);
  return s;
}

Polynomial interpret(const Term& t, const Interpretation& interp, const Signature& sig) {
  if (t.is_var()) return Polynomial::variable(t.var_id());
  std::vector<Polynomial> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(interpret(a, interp, sig));
  if (interp.com_additive && sig.is_compound(t.sym())) {
    Polynomial sum;
    for (const Polynomial& a : args) sum += a;
    return sum;
  }
  auto it = interp.symbols.find(t.sym());
  if (it == interp.symbols.end())
    throw interpret_error("no interpretation for symbol '" + sig.symbol(t.sym()).name + "'");
  Polynomial out;
  for (const auto& [mono, coeff] : it->second.coeffs) {
    Polynomial prod = Polynomial::constant(coeff);
    for (int arg : mono) prod = prod * args.at(static_cast<size_t>(arg));
    out += prod;
  }
  return out;
}

Polynomial expected_poly(const MultiDistribution<Term>& mu, const Interpretation& interp,
                         const Signature& sig) {
  Polynomial out;
  for (const auto& [p, t] : mu.entries()) out += interpret(t, interp, sig).scaled(p);
  return out;
}

std::vector<CoeffPoly> atom_conditions(const PolyAtom& atom) {
  Polynomial diff = atom.lhs - atom.rhs;
  if (atom.kind == PolyAtom::Gt) {
    // GT = GEQ plus constant gap >= 1; an exactly vanishing constant
    // coefficient means the gap condition reduced to 0 >= 0 and is fine.
    diff = diff - Polynomial::constant(CoeffPoly::constant(1));
  }
  std::vector<CoeffPoly> out;
  for (const auto& [m, c] : diff.terms()) {
    (void)m;
    // clear denominators: multiply by lcm so integer arithmetic suffices
    BigInt l = 1;
    for (const auto& [um, r] : c.terms()) {
      (void)um;
      l = lcm_big(l, denominator(r));
    }
    out.push_back(c.scaled(Rational(l)));
  }
  return out;
}

bool atom_holds_concrete(const PolyAtom& atom) {
  for (const CoeffPoly& c : atom_conditions(atom))
    if (c.constant_value() < 0) return false;
  return true;
}

TemplateBuilder::TemplateBuilder(const Signature& sig, DegreeMode degree, bool monotone_strict,
                                 bool com_additive)
    : sig_(sig), degree_(degree), monotone_strict_(monotone_strict), com_additive_(com_additive) {
  interp_.com_additive = com_additive;
}

static void subsets_upto(int n, std::vector<std::vector<int>>& out) {
  out.push_back({});
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

void TemplateBuilder::ensure_symbol(int sym) {
  if (interp_.maps(sym)) return;
  const SymbolInfo& info = sig_.symbol(sym);
  if (com_additive_ && info.kind == SymbolKind::Compound) return;  // fixed additive
  SymbolPoly tpl;
  std::vector<std::vector<int>> monos;
  if (degree_ == DegreeMode::Multilinear) {
    subsets_upto(info.arity, monos);
  } else {
    monos.push_back({});
    for (int i = 0; i < info.arity; ++i) monos.push_back({i});
  }
  for (const auto& m : monos) {
    int u = static_cast<int>(unknown_names_.size());
    std::string nm = info.name + "_";
    if (m.empty()) {
      nm += "0";
    } else {
      for (size_t i = 0; i < m.size(); ++i) {
        if (i) nm += "x";
        nm += std::to_string(m[i] + 1);
      }
    }
    unknown_names_.push_back(nm);
    domain_lo_.push_back(monotone_strict_ && m.size() == 1 ? 1 : 0);
    tpl.coeffs[m] = CoeffPoly::unknown(u);
  }
  interp_.symbols[sym] = std::move(tpl);
}

void TemplateBuilder::ensure_term_symbols(const Term& t) {
  if (t.is_var()) return;
  ensure_symbol(t.sym());
  for (const Term& a : t.args()) ensure_term_symbols(a);
}

ConstraintSet TemplateBuilder::finish_constraints(std::vector<PolyAtom> atoms,
                                                  std::vector<DisjGroup> groups,
                                                  std::string source) const {
  ConstraintSet cs;
  cs.atoms = std::move(atoms);
  cs.groups = std::move(groups);
  cs.unknown_count = unknown_names_.size();
  cs.unknown_names = unknown_names_;
  cs.domain_lo = domain_lo_;
  cs.source = std::move(source);
  return cs;
}

Interpretation TemplateBuilder::concretize(const std::vector<long long>& assignment) const {
  Interpretation out;
  out.com_additive = com_additive_;
  for (const auto& [sym, tpl] : interp_.symbols) {
    SymbolPoly c;
    for (const auto& [m, coeff] : tpl.coeffs) {
      Rational v = coeff.eval(assignment);
      if (v != 0) c.coeffs[m] = CoeffPoly::constant(v);
    }
    out.symbols[sym] = std::move(c);
  }
  return out;
}

}  // namespace ptast
