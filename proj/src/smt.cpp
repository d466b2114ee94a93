#include "smt.hpp"

#include <sstream>

namespace ptast {

namespace {

std::string smt_int(const BigInt& v) {
  if (v < 0) return "(- " + BigInt(-v).str() + ")";
  return v.str();
}

std::string cond_sexpr(const CoeffPoly& c, const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  for (const auto& [m, r] : c.terms()) {
    BigInt k = numerator(r);  // conditions are integral after clearing
    if (m.empty()) {
      parts.push_back(smt_int(k));
      continue;
    }
    std::ostringstream t;
    t << "(* " << smt_int(k);
    for (int u : m) t << " " << names.at(static_cast<size_t>(u));
    t << ")";
    parts.push_back(t.str());
  }
  std::string sum;
  if (parts.empty()) {
    sum = "0";
  } else if (parts.size() == 1) {
    sum = parts[0];
  } else {
    sum = "(+";
    for (const std::string& p : parts) sum += " " + p;
    sum += ")";
  }
  return "(>= " + sum + " 0)";
}

std::string atom_sexpr(const PolyAtom& a, const std::vector<std::string>& names) {
  std::vector<std::string> conds;
  for (const CoeffPoly& c : atom_conditions(a)) conds.push_back(cond_sexpr(c, names));
  if (conds.empty()) return "true";
  if (conds.size() == 1) return conds[0];
  std::string out = "(and";
  for (const std::string& c : conds) out += " " + c;
  out += ")";
  return out;
}

}  // namespace

std::string smt_export(const ConstraintSet& cs) {
  std::ostringstream os;
  os << "; " << (cs.source.empty() ? "constraint export" : cs.source) << "\n";
  os << "(set-logic QF_NIA)\n";
  std::vector<std::string> names;
  for (size_t i = 0; i < cs.unknown_count; ++i) {
    std::string n = "u_" + cs.unknown_names.at(i);
    names.push_back(n);
    os << "(declare-fun " << n << " () Int)\n";
  }
  for (size_t i = 0; i < cs.unknown_count; ++i)
    os << "(assert (>= " << names[i] << " "
       << (i < cs.domain_lo.size() ? cs.domain_lo[i] : 0) << "))\n";
  for (const PolyAtom& a : cs.atoms) {
    if (!a.label.empty()) os << "; " << a.label << "\n";
    os << "(assert " << atom_sexpr(a, names) << ")\n";
  }
  for (const DisjGroup& g : cs.groups) {
    if (!g.label.empty()) os << "; " << g.label << "\n";
    os << "(assert (or";
    for (const auto& alt : g.alternatives) {
      std::string conj;
      if (alt.empty()) {
        conj = "true";
      } else if (alt.size() == 1) {
        conj = atom_sexpr(alt[0], names);
      } else {
        conj = "(and";
        for (const PolyAtom& a : alt) conj += " " + atom_sexpr(a, names);
        conj += ")";
      }
      os << " " << conj;
    }
    os << "))\n";
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

}  // namespace ptast
