#include "rewrite.hpp"

#include <deque>
#include <unordered_map>

namespace ptast {

namespace {

// returns true iff the subtree is a normal form; collects redexes on the way up
bool scan_redexes(const Term& t, const PTRS& r, Position& pos,
                  std::vector<RedexDescriptor>& out) {
  if (t.is_var()) return true;
  bool kids_nf = true;
  for (size_t i = 0; i < t.args().size(); ++i) {
    pos.push_back(static_cast<int>(i + 1));
    kids_nf = scan_redexes(t.args()[i], r, pos, out) && kids_nf;
    pos.pop_back();
  }
  if (!kids_nf) return false;
  bool matched = false;
  for (size_t ri = 0; ri < r.rules().size(); ++ri) {
    if (auto s = match(r.rules()[ri].lhs, t)) {
      out.push_back(RedexDescriptor{pos, ri, std::move(*s)});
      matched = true;
    }
  }
  return !matched;
}

}  // namespace

std::vector<RedexDescriptor> innermost_redexes(const Term& t, const PTRS& r) {
  std::vector<RedexDescriptor> out;
  Position pos;
  scan_redexes(t, r, pos, out);
  return out;
}

MultiDistribution<Term> step(const Term& t, const RedexDescriptor& d, const PTRS& r) {
  if (d.rule_index >= r.rules().size()) throw rewrite_error("rule index out of range");
  const ProbRule& rule = r.rules()[d.rule_index];
  Term redex = subterm_at(t, d.position);
  if (!(apply_subst(rule.lhs, d.subst) == redex))
    throw rewrite_error("descriptor does not describe a redex of the term");
  for (const Term& a : redex.args())
    if (!r.in_normal_form(a)) throw rewrite_error("redex is not innermost");
  std::vector<std::pair<Rational, Term>> es;
  for (const auto& [p, rhs] : rule.rhs.entries())
    es.emplace_back(p, replace_at(t, d.position, apply_subst(rhs, d.subst)));
  return MultiDistribution<Term>(std::move(es));
}

namespace {

// First innermost redex under the given strategy, or nullopt for a normal form.
std::optional<RedexDescriptor> pick_redex(const Term& t, const PTRS& r, LiftStrategy strat) {
  std::vector<RedexDescriptor> all = innermost_redexes(t, r);
  if (all.empty()) return std::nullopt;
  if (strat == LiftStrategy::LeftmostInnermost) return all.front();
  // rightmost position, first rule there
  size_t best = all.size() - 1;
  while (best > 0 && all[best - 1].position == all[best].position) --best;
  return all[best];
}

}  // namespace

std::vector<Rational> lift_exact(const Term& t0, const PTRS& r, size_t depth,
                                 const LiftOptions& opts) {
  std::vector<Rational> out;
  Rational nf_mass = 0;
  std::unordered_map<Term, Rational, TermHash> live;
  if (r.in_normal_form(t0))
    nf_mass = 1;
  else
    live[t0] = 1;
  out.push_back(nf_mass);
  for (size_t n = 0; n < depth; ++n) {
    std::unordered_map<Term, Rational, TermHash> next;
    next.reserve(live.size() * 2);
    for (const auto& [t, p] : live) {
      auto d = pick_redex(t, r, opts.strategy);
      MultiDistribution<Term> dist = step(t, *d, r);
      for (const auto& [q, u] : dist.entries()) {
        Rational m = p * q;
        if (r.in_normal_form(u))
          nf_mass += m;
        else
          next[u] += m;
      }
      if (next.size() > opts.max_entries)
        throw resource_error("distribution exceeds " + std::to_string(opts.max_entries) +
                             " entries at lifting depth " + std::to_string(n + 1));
    }
    live = std::move(next);
    out.push_back(nf_mass);
  }
  return out;
}

std::vector<MultiDistribution<Term>> lift_states(const Term& t0, const PTRS& r, size_t depth,
                                                 size_t max_entries) {
  std::vector<MultiDistribution<Term>> out;
  out.push_back(MultiDistribution<Term>::singleton(t0));
  for (size_t n = 0; n < depth; ++n) {
    std::vector<std::pair<Rational, Term>> es;
    for (const auto& [p, t] : out.back().entries()) {
      auto d = pick_redex(t, r, LiftStrategy::LeftmostInnermost);
      if (!d) {
        es.emplace_back(p, t);  // {1:t} => {1:t} for normal forms
        continue;
      }
      MultiDistribution<Term> dist = step(t, *d, r);
      for (const auto& [q, u] : dist.entries()) es.emplace_back(p * q, u);
      if (es.size() > max_entries) throw resource_error("lift_states entry limit exceeded");
    }
    out.push_back(MultiDistribution<Term>(std::move(es)));
  }
  return out;
}

// --- Monte-Carlo simulation -------------------------------------------------

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Rng {
  uint64_t state;
  uint64_t next() { return splitmix64(state); }
  size_t uniform(size_t n) {
    // rejection sampling keeps the choice unbiased and platform-stable
    uint64_t bound = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= bound);
    return static_cast<size_t>(v % n);
  }
};

struct SimNode {
  int sym;  // symbol id, or -(var)-1
  std::vector<SimNode*> kids;
  SimNode* parent = nullptr;
  enum State : uint8_t { Open, Nf, Redex } state = Nf;
  std::vector<uint32_t> reg_slots;  // registry entries owned by this node
};

struct Simulator {
  const PTRS& sys;
  std::deque<SimNode> arena;
  std::vector<std::pair<SimNode*, size_t>> registry;  // (redex node, rule index)
  std::vector<std::vector<uint64_t>> branch_thresholds;

  explicit Simulator(const PTRS& r) : sys(r) {
    for (const ProbRule& rule : r.rules()) {
      std::vector<uint64_t> th;
      Rational cum = 0;
      for (const auto& [p, t] : rule.rhs.entries()) {
        (void)t;
        cum += p;
        if (cum >= 1) {
          th.push_back(UINT64_MAX);
        } else {
          BigInt scaled = numerator(cum) * (BigInt(1) << 64) / denominator(cum);
          th.push_back(static_cast<uint64_t>(scaled));
        }
      }
      branch_thresholds.push_back(std::move(th));
    }
  }

  SimNode* alloc(int sym, size_t nkids) {
    arena.emplace_back();
    SimNode* n = &arena.back();
    n->sym = sym;
    n->kids.resize(nkids, nullptr);
    return n;
  }

  SimNode* build(const Term& t) {
    if (t.is_var()) return alloc(-t.var_id() - 1, 0);
    SimNode* n = alloc(t.sym(), t.args().size());
    for (size_t i = 0; i < t.args().size(); ++i) {
      n->kids[i] = build(t.args()[i]);
      n->kids[i]->parent = n;
    }
    return n;
  }

  bool match_node(const Term& pat, SimNode* n, std::unordered_map<int, SimNode*>& bind) {
    if (pat.is_var()) {
      auto [it, fresh] = bind.try_emplace(pat.var_id(), n);
      return fresh || node_equal(it->second, n);
    }
    if (n->sym != pat.sym()) return false;
    for (size_t i = 0; i < pat.args().size(); ++i)
      if (!match_node(pat.args()[i], n->kids[i], bind)) return false;
    return true;
  }

  static bool node_equal(SimNode* a, SimNode* b) {
    if (a == b) return true;
    if (a->sym != b->sym || a->kids.size() != b->kids.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
      if (!node_equal(a->kids[i], b->kids[i])) return false;
    return true;
  }

  std::vector<size_t> matching_rules(SimNode* n) {
    std::vector<size_t> out;
    if (n->sym < 0) return out;
    for (size_t ri = 0; ri < sys.rules().size(); ++ri) {
      if (sys.rules()[ri].lhs.sym() != n->sym) continue;
      std::unordered_map<int, SimNode*> bind;
      if (match_node(sys.rules()[ri].lhs, n, bind)) out.push_back(ri);
    }
    return out;
  }

  void unregister(SimNode* n) {
    for (uint32_t slot : n->reg_slots) {
      uint32_t last = static_cast<uint32_t>(registry.size() - 1);
      if (slot != last) {
        registry[slot] = registry[last];
        SimNode* moved = registry[slot].first;
        for (uint32_t& s : moved->reg_slots)
          if (s == last) s = slot;
      }
      registry.pop_back();
    }
    n->reg_slots.clear();
  }

  void register_redex(SimNode* n, const std::vector<size_t>& rules) {
    for (size_t ri : rules) {
      n->reg_slots.push_back(static_cast<uint32_t>(registry.size()));
      registry.emplace_back(n, ri);
    }
  }

  // Recomputes the state of a node whose children are up to date. Returns
  // true when (state, registry entries) changed.
  bool refresh(SimNode* n) {
    bool kids_nf = true;
    for (SimNode* k : n->kids) kids_nf = kids_nf && k->state == SimNode::Nf;
    SimNode::State ns;
    std::vector<size_t> rules;
    if (!kids_nf) {
      ns = SimNode::Open;
    } else {
      rules = matching_rules(n);
      ns = rules.empty() ? SimNode::Nf : SimNode::Redex;
    }
    std::vector<size_t> old_rules;
    for (uint32_t slot : n->reg_slots) old_rules.push_back(registry[slot].second);
    if (ns == n->state && rules == old_rules) return false;
    unregister(n);
    n->state = ns;
    if (ns == SimNode::Redex) register_redex(n, rules);
    return true;
  }

  void init_states(SimNode* n) {
    for (SimNode* k : n->kids) init_states(k);
    refresh(n);
  }

  SimNode* deep_copy(SimNode* src) {
    SimNode* n = alloc(src->sym, src->kids.size());
    n->state = src->state;  // copied subtrees are normal forms
    for (size_t i = 0; i < src->kids.size(); ++i) {
      n->kids[i] = deep_copy(src->kids[i]);
      n->kids[i]->parent = n;
    }
    return n;
  }

  // One rewrite: picks a uniform (redex, rule) descriptor and a probabilistic
  // branch. Returns false when no redex remains.
  bool do_step(Rng& rng, SimNode*& root) {
    if (registry.empty()) return false;
    auto [node, ri] = registry[rng.uniform(registry.size())];
    const ProbRule& rule = sys.rules()[ri];
    size_t k = rule.rhs.size();
    size_t branch = 0;
    if (k > 1) {
      uint64_t v = rng.next();
      const std::vector<uint64_t>& th = branch_thresholds[ri];
      while (branch + 1 < k && v >= th[branch]) ++branch;
    }
    std::unordered_map<int, SimNode*> bind;
    bool ok = match_node(rule.lhs, node, bind);
    (void)ok;
    std::unordered_map<int, bool> used;
    SimNode* repl = build_marked(rule.rhs.entries()[branch].second, bind, used);
    SimNode* parent = node->parent;
    unregister(node);
    if (!parent) {
      root = repl;
      repl->parent = nullptr;
    } else {
      for (SimNode*& kid : parent->kids)
        if (kid == node) {
          kid = repl;
          break;
        }
      repl->parent = parent;
      for (SimNode* a = parent; a; a = a->parent)
        if (!refresh(a)) break;
    }
    return true;
  }

  // instantiate + bottom-up state computation for skeleton nodes
  SimNode* build_marked(const Term& rhs, std::unordered_map<int, SimNode*>& bind,
                        std::unordered_map<int, bool>& used) {
    if (rhs.is_var()) {
      SimNode* v = bind.at(rhs.var_id());
      if (!used[rhs.var_id()]) {
        used[rhs.var_id()] = true;
        return v;
      }
      return deep_copy(v);
    }
    SimNode* n = alloc(rhs.sym(), rhs.args().size());
    for (size_t i = 0; i < rhs.args().size(); ++i) {
      n->kids[i] = build_marked(rhs.args()[i], bind, used);
      n->kids[i]->parent = n;
    }
    refresh(n);
    return n;
  }

  void reset() {
    arena.clear();
    registry.clear();
  }
};

}  // namespace

McResult mc_estimate(const Term& t0, const PTRS& r, size_t max_steps, size_t samples,
                     uint64_t seed) {
  if (samples == 0) throw rewrite_error("mc_estimate requires samples > 0");
  Simulator sim(r);
  McResult res;
  res.samples = samples;
  for (size_t i = 0; i < samples; ++i) {
    uint64_t s0 = seed;
    (void)splitmix64(s0);
    Rng rng{s0 ^ (0x9e3779b97f4a7c15ull * (i + 1))};
    sim.reset();
    SimNode* root = sim.build(t0);
    sim.init_states(root);
    size_t steps = 0;
    while (!sim.registry.empty() && steps < max_steps) {
      sim.do_step(rng, root);
      ++steps;
    }
    if (sim.registry.empty()) ++res.hits;
  }
  return res;
}

// --- chain-step relations ----------------------------------------------------

namespace {

void check_normalized(const Term& a, const Signature& sig) {
  if (a.is_var() || !sig.is_compound(a.sym()))
    throw rewrite_error("expected a normalized compound term");
  for (const Term& s : a.args())
    if (!s.is_var() && sig.is_compound(s.sym()))
      throw rewrite_error("compound term is not normalized");
}

bool rule_in(const ProbRule& rule, const PTRS& s) {
  for (const ProbRule& r : s.rules())
    if (r == rule) return true;
  return false;
}

}  // namespace

MultiDistribution<Term> pptrs_step(const Term& a, size_t i, const CoupledDT& dt,
                                   const Substitution& sigma,
                                   const std::vector<MirrorChoice>& mirror, const PTRS& s) {
  Signature& sig = s.sig_mut();
  check_normalized(a, sig);
  size_t n = a.args().size();
  if (i >= n) throw rewrite_error("argument index out of range");
  if (mirror.size() != n) throw rewrite_error("one mirror choice per argument required");
  const Term& si = a.args()[i];
  if (!(apply_subst(dt.lhs_sharp, sigma) == si))
    throw rewrite_error("selected argument is not an instance of the tuple left-hand side");
  if (!s.in_normal_form(si)) throw rewrite_error("left-hand instance is not in normal form");
  Term lhs_inst = apply_subst(dt.lhs, sigma);
  bool any_mirror = false;
  for (size_t j = 0; j < n; ++j) {
    if (j == i || !mirror[j].rewrite) continue;
    any_mirror = true;
    if (!(subterm_at(a.args()[j], mirror[j].at) == lhs_inst))
      throw rewrite_error("bad mirror position: subterm differs from the rewritten instance");
  }
  if (any_mirror && !rule_in(dt.proj2(), s))
    throw rewrite_error("mirroring requires the coupled rule to be contained in S");

  std::vector<std::pair<Rational, Term>> out;
  for (const auto& [p, br] : dt.rhs.entries()) {
    Terms args;
    args.reserve(n);
    for (size_t j = 0; j < n; ++j) {
      if (j == i)
        args.push_back(apply_subst(br.d, sigma));
      else if (mirror[j].rewrite)
        args.push_back(replace_at(a.args()[j], mirror[j].at, apply_subst(br.r, sigma)));
      else
        args.push_back(a.args()[j]);
    }
    Term raw = Term::app(sig.compound_symbol(static_cast<int>(n)), std::move(args));
    out.emplace_back(p, normalize_compound(raw, sig));
  }
  return MultiDistribution<Term>(std::move(out));
}

MultiDistribution<Term> s_step(const Term& a, size_t i, const Position& pi, size_t rule_index,
                               const std::vector<MirrorChoice>& mirror, const PTRS& s) {
  Signature& sig = s.sig_mut();
  check_normalized(a, sig);
  size_t n = a.args().size();
  if (i >= n) throw rewrite_error("argument index out of range");
  if (rule_index >= s.rules().size()) throw rewrite_error("rule index out of range");
  if (mirror.size() != n) throw rewrite_error("one mirror choice per argument required");
  const ProbRule& rule = s.rules()[rule_index];
  Term redex = subterm_at(a.args()[i], pi);
  auto sg = match(rule.lhs, redex);
  if (!sg) throw rewrite_error("rule does not match at the given position");
  for (const Term& arg : redex.args())
    if (!s.in_normal_form(arg)) throw rewrite_error("redex is not innermost");
  for (size_t j = 0; j < n; ++j) {
    if (j == i || !mirror[j].rewrite) continue;
    if (!(subterm_at(a.args()[j], mirror[j].at) == redex))
      throw rewrite_error("bad mirror position: subterm differs from the rewritten instance");
  }
  std::vector<std::pair<Rational, Term>> out;
  for (const auto& [p, rhs] : rule.rhs.entries()) {
    Term inst = apply_subst(rhs, *sg);
    Terms args;
    args.reserve(n);
    for (size_t j = 0; j < n; ++j) {
      if (j == i)
        args.push_back(replace_at(a.args()[j], pi, inst));
      else if (mirror[j].rewrite)
        args.push_back(replace_at(a.args()[j], mirror[j].at, inst));
      else
        args.push_back(a.args()[j]);
    }
    Term raw = Term::app(sig.compound_symbol(static_cast<int>(n)), std::move(args));
    out.emplace_back(p, normalize_compound(raw, sig));
  }
  return MultiDistribution<Term>(std::move(out));
}

bool chain_step_applicable(const Term& a, const std::vector<CoupledDT>& p, const PTRS& s) {
  if (a.is_var() || !s.sig().is_compound(a.sym())) return false;
  for (const Term& si : a.args()) {
    if (!si.is_var()) {
      for (const CoupledDT& dt : p)
        if (match(dt.lhs_sharp, si) && s.in_normal_form(si)) return true;
    }
    if (!innermost_redexes(si, s).empty()) return true;
  }
  return false;
}

Rational chain_leaf_mass(const std::vector<CoupledDT>& p, const PTRS& s, const Term& root,
                         const ChainPolicy& policy, size_t depth) {
  check_normalized(root, s.sig_mut());
  Rational leaf_mass = 0;
  std::vector<std::pair<Rational, Term>> level{{Rational(1), root}};
  for (size_t d = 0; d <= depth && !level.empty(); ++d) {
    std::vector<std::pair<Rational, Term>> next;
    for (auto& [mass, t] : level) {
      if (!chain_step_applicable(t, p, s)) {
        leaf_mass += mass;
        continue;
      }
      if (d == depth) continue;  // live but out of budget
      std::optional<ChainAction> act = policy(t);
      if (!act) continue;
      MultiDistribution<Term> dist =
          act->kind == ChainAction::PStep
              ? [&] {
                  const CoupledDT& dt = p.at(act->dt_index);
                  auto sg = match(dt.lhs_sharp, t.args().at(act->arg_index));
                  if (!sg) throw rewrite_error("policy chose a non-matching dependency tuple");
                  return pptrs_step(t, act->arg_index, dt, *sg, act->mirror, s);
                }()
              : s_step(t, act->arg_index, act->position, act->rule_index, act->mirror, s);
      for (const auto& [q, u] : dist.entries()) next.emplace_back(mass * q, u);
    }
    level = std::move(next);
  }
  return leaf_mass;
}

}  // namespace ptast
