#include "dtuple.hpp"

#include <algorithm>
#include <sstream>

namespace ptast {

static void cont_rec(const Term& t, const Signature& sig, std::vector<Term>& out) {
  if (!t.is_var() && sig.is_compound(t.sym())) {
    for (const Term& a : t.args()) cont_rec(a, sig, out);
    return;
  }
  out.push_back(t);
}

std::vector<Term> cont(const Term& t, const Signature& sig) {
  std::vector<Term> out;
  cont_rec(t, sig, out);
  return out;
}

Term normalize_compound(const Term& t, Signature& sig) {
  if (t.is_var() || !sig.is_compound(t.sym()))
    throw std::invalid_argument("normalize: root is not a compound symbol");
  std::vector<Term> c = cont(t, sig);
  int sym = sig.compound_symbol(static_cast<int>(c.size()));
  return Term::app(sym, Terms(c.begin(), c.end()));
}

bool cont_equal(const Term& a, const Term& b, const Signature& sig) {
  std::vector<Term> ca = cont(a, sig), cb = cont(b, sig);
  if (ca.size() != cb.size()) return false;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  for (size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

Term sharp(const Term& t, Signature& sig) {
  if (t.is_var()) throw std::invalid_argument("cannot mark a variable");
  return Term::app(sig.tuple_symbol(t.sym()), t.args());
}

Term dp_transform(const Term& r, Signature& sig) {
  std::vector<Term> marked;
  for (const auto& [pos, sub] : subterms(r)) {  // preorder = lexicographic position order
    (void)pos;
    if (!sub.is_var() && sig.symbol(sub.sym()).kind == SymbolKind::Defined)
      marked.push_back(sharp(sub, sig));
  }
  int sym = sig.compound_symbol(static_cast<int>(marked.size()));
  return Term::app(sym, Terms(marked.begin(), marked.end()));
}

std::vector<CoupledDT> dtuples(const PTRS& r) {
  Signature& sig = r.sig_mut();
  std::vector<CoupledDT> out;
  for (const ProbRule& rule : r.rules()) {
    std::vector<std::pair<Rational, DTBranch>> es;
    for (const auto& [p, rhs] : rule.rhs.entries())
      es.emplace_back(p, DTBranch{dp_transform(rhs, sig), rhs});
    out.push_back(CoupledDT{sharp(rule.lhs, sig), rule.lhs,
                            MultiDistribution<DTBranch>(std::move(es))});
  }
  return out;
}

std::string print_dtuple(const CoupledDT& dt, const Signature& sig) {
  std::ostringstream os;
  os << "<" << term_str(dt.lhs_sharp, sig) << ", " << term_str(dt.lhs, sig) << "> -> {";
  for (size_t i = 0; i < dt.rhs.size(); ++i) {
    if (i) os << ", ";
    const auto& [p, br] = dt.rhs.entries()[i];
    os << rat_str(p) << " : <" << term_str(br.d, sig) << ", " << term_str(br.r, sig) << ">";
  }
  os << "}";
  return os.str();
}

std::string print_problem(const ProbDPProblem& p) {
  std::ostringstream os;
  os << "P:\n";
  for (const CoupledDT& dt : p.pairs) os << "  " << print_dtuple(dt, p.rules.sig()) << "\n";
  os << "S:\n";
  for (const ProbRule& r : p.rules.rules()) os << "  " << print_rule(r, p.rules.sig()) << "\n";
  return os.str();
}

}  // namespace ptast
