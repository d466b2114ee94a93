#include "solver.hpp"

#include <algorithm>
#include <cstdlib>

#include "rewrite.hpp"  // resource_error

namespace ptast {

unsigned long long default_node_budget() {
  if (const char* env = std::getenv("PTAST_NODE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10000000ull;
}

namespace {

struct Mono {
  long long coeff;
  std::vector<int> vars;  // sorted, repetition = exponent
};

struct Cond {
  std::vector<Mono> monos;
  long long constant = 0;
};

// group g, alternative a; base conditions use group = -1
struct CondRef {
  int group;
  int alt;
};

struct Compiled {
  std::vector<Cond> conds;
  std::vector<CondRef> refs;
  std::vector<std::vector<size_t>> occurs;  // unknown -> condition indices
  size_t n_groups = 0;
};

long long to_ll(const Rational& r) {
  BigInt num = numerator(r);
  if (denominator(r) != 1) throw std::logic_error("condition coefficient not integral");
  return static_cast<long long>(num);
}

Cond compile_cond(const CoeffPoly& c) {
  Cond out;
  for (const auto& [m, r] : c.terms()) {
    if (m.empty()) {
      out.constant += to_ll(r);
    } else {
      out.monos.push_back(Mono{to_ll(r), m});
    }
  }
  return out;
}

Compiled compile(const ConstraintSet& cs) {
  Compiled cm;
  cm.n_groups = cs.groups.size();
  auto add_atom = [&](const PolyAtom& a, int g, int alt) {
    for (const CoeffPoly& c : atom_conditions(a)) {
      cm.conds.push_back(compile_cond(c));
      cm.refs.push_back(CondRef{g, alt});
    }
  };
  for (const PolyAtom& a : cs.atoms) add_atom(a, -1, -1);
  for (size_t g = 0; g < cs.groups.size(); ++g)
    for (size_t alt = 0; alt < cs.groups[g].alternatives.size(); ++alt)
      for (const PolyAtom& a : cs.groups[g].alternatives[alt])
        add_atom(a, static_cast<int>(g), static_cast<int>(alt));
  cm.occurs.resize(cs.unknown_count);
  for (size_t ci = 0; ci < cm.conds.size(); ++ci)
    for (const Mono& m : cm.conds[ci].monos)
      for (size_t k = 0; k < m.vars.size(); ++k)
        if (k == 0 || m.vars[k] != m.vars[k - 1])
          cm.occurs[static_cast<size_t>(m.vars[k])].push_back(ci);
  return cm;
}

class Search {
 public:
  Search(const ConstraintSet& cs, const SolverOptions& opts)
      : cs_(cs), opts_(opts), cm_(compile(cs)) {
    size_t n = cs.unknown_count;
    lo_.resize(n, 0);
    hi_.resize(n, opts.coeff_bound);
    for (size_t i = 0; i < n; ++i)
      if (i < cs.domain_lo.size()) lo_[i] = std::max(lo_[i], cs.domain_lo[i]);
  }

  SolveResult run() {
    SolveResult res;
    for (size_t i = 0; i < lo_.size(); ++i)
      if (lo_[i] > hi_[i]) return res;  // empty domain: Unsat
    SolveStatus st = dfs(0);
    res.status = st;
    res.nodes = nodes_;
    if (st == SolveStatus::Sat) {
      res.assignment = lo_;
      res.chosen_alt = chosen_;
    }
    return res;
  }

 private:
  // bounds of a condition under the current box; unknowns are >= 0
  void cond_bounds(const Cond& c, long long& mn, long long& mx) const {
    mn = mx = c.constant;
    for (const Mono& m : c.monos) {
      long long plo = 1, phi = 1;
      for (int v : m.vars) {
        plo *= lo_[static_cast<size_t>(v)];
        phi *= hi_[static_cast<size_t>(v)];
      }
      if (m.coeff >= 0) {
        mn += m.coeff * plo;
        mx += m.coeff * phi;
      } else {
        mn += m.coeff * phi;
        mx += m.coeff * plo;
      }
    }
  }

  bool cond_possibly_sat(size_t ci) const {
    long long mn, mx;
    cond_bounds(cm_.conds[ci], mn, mx);
    return mx >= 0;
  }

  // alive alternatives of each group under the current box
  bool groups_alive(std::vector<std::vector<char>>& alive) const {
    alive.assign(cm_.n_groups, {});
    for (size_t g = 0; g < cm_.n_groups; ++g)
      alive[g].assign(cs_.groups[g].alternatives.size(), 1);
    for (size_t ci = 0; ci < cm_.conds.size(); ++ci) {
      const CondRef& r = cm_.refs[ci];
      if (r.group < 0) continue;
      if (!alive[static_cast<size_t>(r.group)][static_cast<size_t>(r.alt)]) continue;
      if (!cond_possibly_sat(ci))
        alive[static_cast<size_t>(r.group)][static_cast<size_t>(r.alt)] = 0;
    }
    for (size_t g = 0; g < cm_.n_groups; ++g)
      if (std::find(alive[g].begin(), alive[g].end(), 1) == alive[g].end()) return false;
    return true;
  }

  bool base_feasible() const {
    for (size_t ci = 0; ci < cm_.conds.size(); ++ci)
      if (cm_.refs[ci].group < 0 && !cond_possibly_sat(ci)) return false;
    return true;
  }

  // narrows the domain of every unassigned unknown by endpoint tests against
  // base conditions; returns false on a wiped domain
  bool narrow(size_t from) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t v = from; v < lo_.size(); ++v) {
        if (lo_[v] == hi_[v]) continue;  // base_feasible already covers fixed values
        while (lo_[v] <= hi_[v] && !value_feasible(v, lo_[v])) {
          ++lo_[v];
          changed = true;
        }
        while (lo_[v] < hi_[v] && !value_feasible(v, hi_[v])) {
          --hi_[v];
          changed = true;
        }
        if (lo_[v] > hi_[v]) return false;
      }
      if (changed && !base_feasible()) return false;
    }
    return true;
  }

  bool value_feasible(size_t v, long long val) {
    long long slo = lo_[v], shi = hi_[v];
    lo_[v] = hi_[v] = val;
    bool ok = true;
    for (size_t ci : cm_.occurs[v])
      if (cm_.refs[ci].group < 0 && !cond_possibly_sat(ci)) {
        ok = false;
        break;
      }
    lo_[v] = slo;
    hi_[v] = shi;
    return ok;
  }

  SolveStatus dfs(size_t idx) {
    if (++nodes_ > opts_.node_budget) return SolveStatus::Budget;
    if ((nodes_ & 4095) == 0 && opts_.deadline &&
        std::chrono::steady_clock::now() > *opts_.deadline)
      return SolveStatus::Budget;
    if (!base_feasible()) return SolveStatus::Unsat;
    std::vector<std::vector<char>> alive;
    if (!groups_alive(alive)) return SolveStatus::Unsat;
    if (idx == lo_.size()) {
      // complete assignment: groups already verified exactly (bounds collapse)
      chosen_.clear();
      for (size_t g = 0; g < cm_.n_groups; ++g) {
        size_t pick = alive[g].size();
        for (size_t a = 0; a < alive[g].size(); ++a)
          if (alive[g][a]) {
            pick = a;
            break;
          }
        chosen_.push_back(pick);
      }
      return SolveStatus::Sat;
    }
    long long slo = lo_[idx], shi = hi_[idx];
    bool budget_hit = false;
    for (long long v = slo; v <= shi; ++v) {
      std::vector<long long> save_lo(lo_.begin() + static_cast<long>(idx), lo_.end());
      std::vector<long long> save_hi(hi_.begin() + static_cast<long>(idx), hi_.end());
      lo_[idx] = hi_[idx] = v;
      SolveStatus st = SolveStatus::Unsat;
      if (narrow(idx + 1)) st = dfs(idx + 1);
      if (st == SolveStatus::Sat) return st;
      if (st == SolveStatus::Budget) budget_hit = true;
      std::copy(save_lo.begin(), save_lo.end(), lo_.begin() + static_cast<long>(idx));
      std::copy(save_hi.begin(), save_hi.end(), hi_.begin() + static_cast<long>(idx));
      if (budget_hit) break;
    }
    lo_[idx] = slo;
    hi_[idx] = shi;
    return budget_hit ? SolveStatus::Budget : SolveStatus::Unsat;
  }

  const ConstraintSet& cs_;
  const SolverOptions& opts_;
  Compiled cm_;
  std::vector<long long> lo_, hi_;
  std::vector<size_t> chosen_;
  unsigned long long nodes_ = 0;
};

}  // namespace

SolveResult solve_bounded(const ConstraintSet& cs, const SolverOptions& opts) {
  if (opts.coeff_bound < 1) throw std::invalid_argument("coefficient bound must be >= 1");
  Search s(cs, opts);
  return s.run();
}

}  // namespace ptast
