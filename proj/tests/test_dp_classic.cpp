#include <doctest.h>

#include <set>

#include "dp_classic.hpp"
#include "helpers.hpp"
#include "rewrite.hpp"

using namespace ptast;
using namespace ptast::test;

namespace {

Trs classic(const PTRS& sys) { return Trs::from_classified(sys.sig_ptr(), np(sys)); }

std::set<std::string> pair_strings(const std::vector<DependencyPair>& ps, const Signature& sig) {
  std::set<std::string> out;
  for (const DependencyPair& p : ps) out.insert(print_pair(p, sig));
  return out;
}

}  // namespace

TEST_CASE("dependency pairs") {
  SUBCASE("division") {
    PTRS div = load_corpus("div");
    Trs trs = classic(div);
    auto pairs = dependency_pairs(trs);
    CHECK(pair_strings(pairs, *trs.sig) ==
          std::set<std::string>{"MINUS(s(x), s(y)) -> MINUS(x, y)",
                                "DIV(s(x), s(y)) -> MINUS(x, y)",
                                "DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))"});
  }
  SUBCASE("constructor right-hand sides yield no pairs") {
    PTRS sys = parse_ptrs("(VAR x)\n(RULES f(x) -> s(x))");
    CHECK(dependency_pairs(classic(sys)).empty());
  }
  SUBCASE("minus subset") {
    PTRS m = load_corpus("minus");
    Trs trs = classic(m);
    auto pairs = dependency_pairs(trs);
    CHECK(pair_strings(pairs, *trs.sig) ==
          std::set<std::string>{"MINUS(s(x), s(y)) -> MINUS(x, y)"});
  }
  SUBCASE("duplicate defined subterms collapse") {
    PTRS sys = parse_ptrs("(VAR x)\n(RULES g(x) -> x\n f(x) -> p(g(x), g(x)))");
    Trs trs = classic(sys);
    CHECK(dependency_pairs(trs).size() == 1);
  }
}

TEST_CASE("estimated dependency graph") {
  PTRS div = load_corpus("div");
  Trs trs = classic(div);
  auto pairs = dependency_pairs(trs);
  REQUIRE(pairs.size() == 3);
  auto find = [&](const std::string& s) -> size_t {
    for (size_t i = 0; i < pairs.size(); ++i)
      if (print_pair(pairs[i], *trs.sig) == s) return i;
    FAIL("missing pair ", s);
    return 0;
  };
  size_t mm = find("MINUS(s(x), s(y)) -> MINUS(x, y)");
  size_t dm = find("DIV(s(x), s(y)) -> MINUS(x, y)");
  size_t dd = find("DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))");

  SUBCASE("exactly the four paper edges") {
    auto edges = estimate_dep_graph(pairs, trs);
    std::set<std::pair<size_t, size_t>> e(edges.begin(), edges.end());
    CHECK(e == std::set<std::pair<size_t, size_t>>{{mm, mm}, {dm, mm}, {dd, dm}, {dd, dd}});
  }
  SUBCASE("empty pair set") {
    CHECK(estimate_dep_graph({}, trs).empty());
  }

  SUBCASE("soundness against bounded concrete reachability") {
    // ground oracle: instantiate with constructor terms of depth <= 3,
    // rewrite innermost for <= 6 steps, check reachability of each lhs
    Terms ground{pt(div, "0"), pt(div, "s(0)"), pt(div, "s(s(0))"), pt(div, "s(s(s(0)))")};
    auto edges = estimate_dep_graph(pairs, trs);
    std::set<std::pair<size_t, size_t>> estimated(edges.begin(), edges.end());
    PTRS& sys = div;
    for (size_t i = 0; i < pairs.size(); ++i) {
      std::vector<int> vars = term_vars(pairs[i].lhs);
      REQUIRE(!vars.empty());
      std::vector<size_t> idx(vars.size(), 0);
      for (;;) {
        Substitution sigma;
        for (size_t k = 0; k < vars.size(); ++k) sigma[vars[k]] = ground[idx[k]];
        Term lhs_inst = apply_subst(pairs[i].lhs, sigma);
        Term rhs_inst = apply_subst(pairs[i].rhs, sigma);
        if (trs.in_normal_form(lhs_inst)) {
          std::set<Term> frontier{rhs_inst}, seen{rhs_inst};
          for (int stepn = 0; stepn < 6; ++stepn) {
            std::set<Term> next;
            for (const Term& t : frontier)
              for (const RedexDescriptor& rd : innermost_redexes(t, sys)) {
                MultiDistribution<Term> dist = step(t, rd, sys);
                for (const auto& [p, u] : dist.entries()) {
                  (void)p;
                  if (seen.insert(u).second) next.insert(u);
                }
              }
            frontier = std::move(next);
          }
          for (size_t j = 0; j < pairs.size(); ++j) {
            bool witnessed = false;
            for (const Term& t : seen)
              if (match(pairs[j].lhs, t) && trs.in_normal_form(t)) witnessed = true;
            if (witnessed) CHECK(estimated.count({i, j}));
          }
        }
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == ground.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
}

TEST_CASE("SCC processor") {
  PTRS div = load_corpus("div");
  Trs trs = classic(div);
  ClassicDPProblem prob{dependency_pairs(trs), trs};

  SUBCASE("two singleton cycles for division") {
    auto sccs = scc_processor(prob);
    REQUIRE(sccs.size() == 2);
    CHECK(sccs[0].size() == 1);
    CHECK(sccs[1].size() == 1);
    std::set<std::string> roots;
    for (auto& scc : sccs) roots.insert(print_pair(prob.pairs[scc[0]], *trs.sig));
    CHECK(roots == std::set<std::string>{"MINUS(s(x), s(y)) -> MINUS(x, y)",
                                         "DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))"});
  }
  SUBCASE("acyclic graph yields nothing") {
    auto sccs = scc_split(2, {{0, 1}});
    CHECK(sccs.empty());
  }
  SUBCASE("two disjoint self-loops") {
    auto sccs = scc_split(2, {{0, 0}, {1, 1}});
    REQUIRE(sccs.size() == 2);
    CHECK(sccs[0] == std::vector<size_t>{0});
    CHECK(sccs[1] == std::vector<size_t>{1});
  }
  SUBCASE("components are disjoint and cycle-closed") {
    auto edges = estimate_dep_graph(prob.pairs, trs);
    auto sccs = scc_split(prob.pairs.size(), edges);
    std::set<size_t> all;
    for (auto& scc : sccs)
      for (size_t i : scc) CHECK(all.insert(i).second);
    std::set<std::pair<size_t, size_t>> e(edges.begin(), edges.end());
    for (auto& scc : sccs)
      if (scc.size() == 1) CHECK(e.count({scc[0], scc[0]}));
  }
}

TEST_CASE("usable rules") {
  PTRS div = load_corpus("div");
  Trs trs = classic(div);
  auto pairs = dependency_pairs(trs);
  auto by_print = [&](const std::string& s) {
    for (const DependencyPair& p : pairs)
      if (print_pair(p, *trs.sig) == s) return p;
    throw std::runtime_error("pair not found");
  };

  SUBCASE("minus rules usable below the div pair") {
    auto ur = usable_rules({by_print("DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))")}, trs);
    CHECK(ur == std::vector<size_t>{0, 1});
  }
  SUBCASE("no usable rules for the minus pair") {
    auto ur = usable_rules({by_print("MINUS(s(x), s(y)) -> MINUS(x, y)")}, trs);
    CHECK(ur.empty());
  }
  SUBCASE("mentioning every defined symbol pulls in all rules") {
    auto ur = usable_rules({by_print("DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))"),
                            DependencyPair{pairs[0].lhs, pt(div, "div(minus(x, y), s(y))"), 0, {}}},
                           trs);
    CHECK(ur.size() == trs.rules.size());
  }
  SUBCASE("monotone and idempotent") {
    auto small = usable_rules({by_print("MINUS(s(x), s(y)) -> MINUS(x, y)")}, trs);
    auto large = usable_rules(pairs, trs);
    CHECK(small.size() <= large.size());
    std::vector<NonProbRule> kept;
    for (size_t i : large) kept.push_back(trs.rules[i]);
    Trs sub = Trs::from(trs.sig, kept);
    auto again = usable_rules(pairs, sub);
    CHECK(again.size() == kept.size());
  }
}

TEST_CASE("classic reduction pair processor") {
  PTRS div = load_corpus("div");
  Trs trs = classic(div);
  auto pairs = dependency_pairs(trs);
  auto by_print = [&](const std::string& s) {
    for (const DependencyPair& p : pairs)
      if (print_pair(p, *trs.sig) == s) return p;
    throw std::runtime_error("pair not found");
  };
  SolverOptions opts;
  opts.coeff_bound = 2;

  SUBCASE("div pair with the minus rules") {
    ClassicDPProblem prob;
    prob.pairs = {by_print("DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))")};
    prob.rules = Trs::from(trs.sig, {trs.rules[0], trs.rules[1]});
    auto res = reduction_pair_processor(prob, opts);
    REQUIRE(res);
    CHECK(res->removed == std::vector<size_t>{0});
    CHECK(check_classic_rpp(prob, res->interp, res->removed).ok);
  }
  SUBCASE("minus pair without rules, paper witness validates") {
    ClassicDPProblem prob;
    prob.pairs = {by_print("MINUS(s(x), s(y)) -> MINUS(x, y)")};
    prob.rules = Trs::from(trs.sig, {});
    auto res = reduction_pair_processor(prob, opts);
    REQUIRE(res);
    CHECK(res->removed == std::vector<size_t>{0});
    Interpretation interp;
    auto one_affine = [](std::map<std::vector<int>, Rational> cs) {
      SymbolPoly s;
      for (auto& [m, c] : cs) s.coeffs[m] = CoeffPoly::constant(c);
      return s;
    };
    interp.symbols[trs.sig->find_symbol("0")] = one_affine({});
    interp.symbols[trs.sig->find_symbol("s")] = one_affine({{{}, 1}, {{0}, 1}});
    interp.symbols[trs.sig->find_symbol("minus#")] = one_affine({{{0}, 1}});
    CHECK(check_classic_rpp(prob, interp, {0}).ok);
  }
  SUBCASE("empty pair set is not applicable") {
    ClassicDPProblem prob;
    prob.rules = trs;
    CHECK(!reduction_pair_processor(prob, opts));
  }
}

TEST_CASE("classic driver") {
  ProveOptions opts;
  opts.solver.coeff_bound = 2;
  SUBCASE("division is innermost terminating") {
    PTRS div = load_corpus("div");
    ClassicOutcome oc = prove_iterm(classic(div), opts);
    CHECK(oc.proved);
  }
  SUBCASE("minus is innermost terminating") {
    PTRS m = load_corpus("minus");
    CHECK(prove_iterm(classic(m), opts).proved);
  }
  SUBCASE("the trivial loop stays unknown") {
    PTRS loop = load_corpus("loop");
    ClassicOutcome oc = prove_iterm(classic(loop), opts);
    CHECK(!oc.proved);
  }
  SUBCASE("quicksort's non-probabilistic variant is not provable") {
    PTRS qs = load_corpus("qs");
    ClassicOutcome oc = prove_iterm(classic(qs), opts);
    CHECK(!oc.proved);
  }
}

TEST_CASE("dot export") {
  PTRS div = load_corpus("div");
  Trs trs = classic(div);
  std::string dot = classic_graph_dot(dependency_pairs(trs), trs);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("MINUS(s(x), s(y)) -> MINUS(x, y)") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}
