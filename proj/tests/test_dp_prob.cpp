#include <doctest.h>

#include <set>

#include "certificate.hpp"
#include "dp_prob.hpp"
#include "helpers.hpp"
#include "rewrite.hpp"

using namespace ptast;
using namespace ptast::test;

TEST_CASE("dp transformation") {
  PTRS div = load_corpus("div");
  Signature& sig = div.sig_mut();
  SUBCASE("nested defined subterms in position order") {
    Term r = pt(div, "s(div(minus(x, y), s(y)))");
    Term d = dp_transform(r, sig);
    CHECK(term_str(d, sig) == "c2(DIV(minus(x, y), s(y)), MINUS(x, y))");
  }
  SUBCASE("variable right-hand side") {
    CHECK(term_str(dp_transform(Term::var(sig.find_var("x")), sig), sig) == "c0");
  }
  SUBCASE("duplicates preserved as a multiset") {
    PTRS r1 = load_corpus("r1");
    Signature& s1 = r1.sig_mut();
    Term d = dp_transform(pt(r1, "f(g, g)"), s1);
    CHECK(term_str(d, s1) == "c2(G, G)");
  }
}

TEST_CASE("compound normalization") {
  PTRS div = load_corpus("div");
  Signature& sig = div.sig_mut();
  int c0 = sig.compound_symbol(0), c1 = sig.compound_symbol(1), c2 = sig.compound_symbol(2);
  int vx = sig.find_var("x"), vy = sig.find_var("y");
  SUBCASE("flattening") {
    Term nested = Term::app(c2, {Term::app(c1, {Term::var(vx)}),
                                 Term::app(c2, {Term::var(vx), Term::var(vy)})});
    CHECK(term_str(normalize_compound(nested, sig), sig) == "c3(x, x, y)");
  }
  SUBCASE("empty content") {
    CHECK(term_str(normalize_compound(Term::app(c0, {}), sig), sig) == "c0");
    CHECK(term_str(normalize_compound(Term::app(c1, {Term::app(c0, {})}), sig), sig) == "c0");
  }
  SUBCASE("idempotent and content preserving on random nestings") {
    XorShift rng(23);
    Terms leaves{Term::var(vx), Term::var(vy), pt(div, "0"), pt(div, "s(0)"),
                 pt(div, "minus(x, y)")};
    for (int round = 0; round < 1000; ++round) {
      // random compound tree of depth <= 3
      std::function<Term(int)> build = [&](int depth) -> Term {
        if (depth == 0 || rng.below(3) == 0) return leaves[rng.below(leaves.size())];
        size_t n = rng.below(3);
        Terms args;
        for (size_t i = 0; i < n; ++i) args.push_back(build(depth - 1));
        return Term::app(sig.compound_symbol(static_cast<int>(n)), std::move(args));
      };
      Terms args;
      size_t n = rng.below(4);
      for (size_t i = 0; i < n; ++i) args.push_back(build(2));
      Term t = Term::app(sig.compound_symbol(static_cast<int>(n)), std::move(args));
      Term norm = normalize_compound(t, sig);
      CHECK(cont_equal(t, norm, sig));
      CHECK(normalize_compound(norm, sig) == norm);
      // the ~~ relation is symmetric and reflexive here
      CHECK(cont_equal(norm, t, sig));
      CHECK(cont_equal(t, t, sig));
    }
  }
}

TEST_CASE("coupled dependency tuples") {
  SUBCASE("pdiv tuples match the paper") {
    PTRS pdiv = load_corpus("pdiv");
    auto dts = dtuples(pdiv);
    REQUIRE(dts.size() == 4);
    const Signature& sig = pdiv.sig();
    CHECK(print_dtuple(dts[0], sig) == "<MINUS(x, 0), minus(x, 0)> -> {1 : <c0, x>}");
    CHECK(print_dtuple(dts[1], sig) ==
          "<MINUS(s(x), s(y)), minus(s(x), s(y))> -> {1 : <c1(MINUS(x, y)), minus(x, y)>}");
    CHECK(print_dtuple(dts[2], sig) == "<DIV(0, s(y)), div(0, s(y))> -> {1 : <c0, 0>}");
    CHECK(print_dtuple(dts[3], sig) ==
          "<DIV(s(x), s(y)), div(s(x), s(y))> -> {1/2 : <c1(DIV(s(x), s(y))), div(s(x), s(y))>, "
          "1/2 : <c2(DIV(minus(x, y), s(y)), MINUS(x, y)), s(div(minus(x, y), s(y)))>}");
  }
  SUBCASE("r3 a-tuple") {
    PTRS r3 = load_corpus("r3");
    auto dts = dtuples(r3);
    REQUIRE(dts.size() == 4);
    CHECK(print_dtuple(dts[1], r3.sig()) ==
          "<A, a> -> {1/2 : <c1(B1), b1>, 1/2 : <c1(B2), b2>}");
  }
  SUBCASE("constructor right-hand sides carry c0") {
    PTRS sys = parse_ptrs("(VAR x)\n(RULES f(x) -> {1/2 : s(x), 1/2 : 0})");
    auto dts = dtuples(sys);
    REQUIRE(dts.size() == 1);
    for (const auto& [p, br] : dts[0].rhs.entries()) {
      (void)p;
      CHECK(term_str(br.d, sys.sig()) == "c0");
    }
  }
  SUBCASE("content of the tuple side equals the transformed right-hand side") {
    for (const char* name : {"pdiv", "qs", "bogo", "r3", "incompl", "loopxy"}) {
      PTRS sys = load_corpus(name);
      Signature& sig = sys.sig_mut();
      for (const CoupledDT& dt : dtuples(sys))
        for (const auto& [p, br] : dt.rhs.entries()) {
          (void)p;
          CHECK(cont_equal(br.d, dp_transform(br.r, sig), sig));
        }
    }
  }
}

TEST_CASE("probabilistic dependency graph") {
  SUBCASE("pdiv has exactly the six paper edges") {
    PTRS pdiv = load_corpus("pdiv");
    auto dts = dtuples(pdiv);
    auto edges = prob_dep_graph(dts, pdiv);
    std::set<std::pair<size_t, size_t>> e(edges.begin(), edges.end());
    CHECK(e == std::set<std::pair<size_t, size_t>>{{1, 0}, {1, 1}, {3, 0}, {3, 1}, {3, 2},
                                                   {3, 3}});
  }
  SUBCASE("empty pair set") {
    PTRS pdiv = load_corpus("pdiv");
    CHECK(prob_dep_graph({}, pdiv).empty());
  }
  SUBCASE("incompl: the f-tuple and the first g-tuple form a cycle") {
    PTRS inc = load_corpus("incompl");
    auto dts = dtuples(inc);
    REQUIRE(dts.size() == 3);
    auto edges = prob_dep_graph(dts, inc);
    std::set<std::pair<size_t, size_t>> e(edges.begin(), edges.end());
    CHECK(e.count({0, 2}));  // G-tuple -> F-tuple via F(g)
    CHECK(e.count({2, 0}));  // F-tuple -> first G-tuple via G
    auto sccs = prob_scc_processor(ProbDPProblem{dts, inc});
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0] == std::vector<size_t>{0, 2});
  }
  SUBCASE("soundness against bounded concrete reachability") {
    for (const char* name : {"r3", "pdiv"}) {
      PTRS sys = load_corpus(name);
      auto dts = dtuples(sys);
      auto edges = prob_dep_graph(dts, sys);
      std::set<std::pair<size_t, size_t>> estimated(edges.begin(), edges.end());
      // ground constructor instantiations of depth <= 3
      Terms ground;
      for (int c : sys.constructor_symbols())
        if (sys.sig().symbol(c).arity == 0) ground.push_back(Term::app(c, {}));
      if (ground.empty()) ground.push_back(pt(sys, "0"));
      std::vector<Term> grown = ground;
      for (int depth = 0; depth < 2; ++depth) {
        std::vector<Term> next;
        for (int c : sys.constructor_symbols())
          if (sys.sig().symbol(c).arity == 1)
            for (const Term& g : grown) next.push_back(Term::app(c, {g}));
        for (const Term& t : next) grown.push_back(t);
        if (next.empty()) break;
      }
      std::vector<NonProbRule> nrules = np(sys);
      PTRS np_sys = sys;  // innermost rewriting over np(S): reuse PTRS machinery
      {
        std::vector<ProbRule> det;
        for (const NonProbRule& r : nrules)
          det.push_back(ProbRule{r.lhs, MultiDistribution<Term>::singleton(r.rhs)});
        np_sys = sys.with_rules(det);
      }
      for (size_t i = 0; i < dts.size(); ++i) {
        std::vector<int> vars = term_vars(dts[i].lhs_sharp);
        std::vector<size_t> idx(vars.size(), 0);
        for (;;) {
          Substitution sigma;
          for (size_t k = 0; k < vars.size(); ++k) sigma[vars[k]] = grown[idx[k]];
          Term lhs_inst = apply_subst(dts[i].lhs_sharp, sigma);
          if (sys.in_normal_form(lhs_inst)) {
            for (const auto& [p, br] : dts[i].rhs.entries()) {
              (void)p;
              for (const Term& t0 : cont(br.d, sys.sig())) {
                std::set<Term> frontier{apply_subst(t0, sigma)}, seen = frontier;
                for (int stepn = 0; stepn < 6; ++stepn) {
                  std::set<Term> next;
                  for (const Term& t : frontier)
                    for (const RedexDescriptor& rd : innermost_redexes(t, np_sys)) {
                      MultiDistribution<Term> dist = step(t, rd, np_sys);
                      for (const auto& [q, u] : dist.entries()) {
                        (void)q;
                        if (seen.insert(u).second) next.insert(u);
                      }
                    }
                  frontier = std::move(next);
                }
                for (size_t j = 0; j < dts.size(); ++j) {
                  bool witnessed = false;
                  for (const Term& t : seen)
                    if (match(dts[j].lhs_sharp, t) && sys.in_normal_form(t)) witnessed = true;
                  if (witnessed) CHECK(estimated.count({i, j}));
                }
              }
            }
          }
          size_t k = 0;
          while (k < idx.size() && ++idx[k] == grown.size()) idx[k++] = 0;
          if (k == idx.size() || vars.empty()) break;
        }
      }
    }
  }
}

TEST_CASE("SCC processor for pdiv") {
  PTRS pdiv = load_corpus("pdiv");
  auto dts = dtuples(pdiv);
  auto sccs = prob_scc_processor(ProbDPProblem{dts, pdiv});
  REQUIRE(sccs.size() == 2);
  CHECK(sccs[0] == std::vector<size_t>{1});
  CHECK(sccs[1] == std::vector<size_t>{3});
}

TEST_CASE("quicksort splits into six sub-problems") {
  PTRS qs = load_corpus("qs");
  auto dts = dtuples(qs);
  auto sccs = prob_scc_processor(ProbDPProblem{dts, qs});
  CHECK(sccs.size() == 6);
}

TEST_CASE("usable terms processor") {
  PTRS pdiv = load_corpus("pdiv");
  auto dts = dtuples(pdiv);
  SUBCASE("pdiv tuple 16 shrinks to 17") {
    std::vector<CoupledDT> p{dts[3]};
    auto ut = usable_terms_processor(p, pdiv);
    REQUIRE(ut.size() == 1);
    CHECK(print_dtuple(ut[0], pdiv.sig()) ==
          "<DIV(s(x), s(y)), div(s(x), s(y))> -> {1/2 : <c1(DIV(s(x), s(y))), div(s(x), s(y))>, "
          "1/2 : <c1(DIV(minus(x, y), s(y))), s(div(minus(x, y), s(y)))>}");
  }
  SUBCASE("identity when everything is usable") {
    std::vector<CoupledDT> p{dts[1]};
    auto ut = usable_terms_processor(p, pdiv);
    CHECK(print_dtuple(ut[0], pdiv.sig()) == print_dtuple(dts[1], pdiv.sig()));
  }
  SUBCASE("never enlarges and is idempotent") {
    for (const char* name : {"pdiv", "qs", "r3", "incompl", "walk2"}) {
      PTRS sys = load_corpus(name);
      auto all = dtuples(sys);
      auto once = usable_terms_processor(all, sys);
      auto twice = usable_terms_processor(once, sys);
      REQUIRE(once.size() == all.size());
      for (size_t i = 0; i < all.size(); ++i) {
        for (size_t j = 0; j < all[i].rhs.size(); ++j) {
          size_t before = cont(all[i].rhs.entries()[j].second.d, sys.sig()).size();
          size_t after = cont(once[i].rhs.entries()[j].second.d, sys.sig()).size();
          CHECK(after <= before);
        }
        CHECK(print_dtuple(twice[i], sys.sig()) == print_dtuple(once[i], sys.sig()));
      }
    }
  }
  SUBCASE("transformed tuple sides stay inside the content of dp(r)") {
    for (const char* name : {"pdiv", "qs", "r3", "incompl"}) {
      PTRS sys = load_corpus(name);
      Signature& sig = sys.sig_mut();
      auto once = usable_terms_processor(dtuples(sys), sys);
      for (const CoupledDT& dt : once)
        for (const auto& [p, br] : dt.rhs.entries()) {
          (void)p;
          std::vector<Term> kept = cont(br.d, sig);
          std::vector<Term> full = cont(dp_transform(br.r, sig), sig);
          std::multiset<Term> pool(full.begin(), full.end());
          for (const Term& t : kept) {
            auto it = pool.find(t);
            REQUIRE(it != pool.end());
            pool.erase(it);
          }
        }
    }
  }
  SUBCASE("content equivalence is transitive") {
    PTRS div = load_corpus("div");
    Signature& sig = div.sig_mut();
    int c2 = sig.compound_symbol(2), c1 = sig.compound_symbol(1);
    int vx = sig.find_var("x"), vy = sig.find_var("y");
    Term a = Term::app(c2, {Term::var(vx), Term::var(vy)});
    Term b = Term::app(c2, {Term::app(c1, {Term::var(vx)}), Term::var(vy)});
    Term c = Term::app(c1, {Term::app(c2, {Term::var(vx), Term::var(vy)})});
    CHECK(cont_equal(a, b, sig));
    CHECK(cont_equal(b, c, sig));
    CHECK(cont_equal(a, c, sig));
  }
  SUBCASE("walk2: the plain variable argument is removed") {
    // the estimation keeps G(g^3(x)), G(g^2(x)), G(g(x)) and drops G(x):
    // an instance of G(x) in normal form can never rewrite to a G(g(..))
    // instance whose own left-hand side is normal
    PTRS w2 = load_corpus("walk2");
    auto all = dtuples(w2);
    REQUIRE(all.size() == 1);
    auto ut = usable_terms_processor(all, w2);
    CHECK(cont(all[0].rhs.entries()[0].second.d, w2.sig()).size() == 4);
    CHECK(cont(ut[0].rhs.entries()[0].second.d, w2.sig()).size() == 3);
    CHECK(term_str(ut[0].rhs.entries()[0].second.d, w2.sig()) ==
          "c3(G(g(g(g(x)))), G(g(g(x))), G(g(x)))");
  }
}

TEST_CASE("probabilistic usable rules") {
  PTRS pdiv = load_corpus("pdiv");
  auto dts = dtuples(pdiv);
  SUBCASE("minus rules for the shrunk div tuple") {
    auto ut = usable_terms_processor({dts[3]}, pdiv);
    auto ur = prob_usable_rules(ut, pdiv);
    CHECK(ur == std::vector<size_t>{0, 1});
  }
  SUBCASE("none for the minus tuple") {
    CHECK(prob_usable_rules({dts[1]}, pdiv).empty());
  }
  SUBCASE("everything usable when all defined symbols occur") {
    PTRS sys = parse_ptrs(
        "(VAR x)\n(RULES f(x) -> {1/2 : p(f(g(x))), 1/2 : x}\n g(x) -> f(x))");
    auto all = dtuples(sys);
    auto ur = prob_usable_rules(all, sys);
    CHECK(ur.size() == sys.rules().size());
  }
}

TEST_CASE("probabilistic reduction pair processor") {
  SolverOptions opts;
  opts.coeff_bound = 2;
  PTRS pdiv = load_corpus("pdiv");
  auto dts = dtuples(pdiv);

  SUBCASE("shrunk div problem with the minus rules") {
    auto ut = usable_terms_processor({dts[3]}, pdiv);
    ProbDPProblem prob{ut, pdiv.with_rules({pdiv.rules()[0], pdiv.rules()[1]})};
    auto res = prob_reduction_pair_processor(prob, opts, DegreeMode::Linear);
    REQUIRE(res);
    CHECK(res->removed == std::vector<size_t>{0});
    CHECK(check_prob_rpp(prob, res->interp, res->removed).ok);
  }
  SUBCASE("minus problem with no rules") {
    ProbDPProblem prob{{dts[1]}, pdiv.with_rules({})};
    auto res = prob_reduction_pair_processor(prob, opts, DegreeMode::Linear);
    REQUIRE(res);
    CHECK(res->removed == std::vector<size_t>{0});
  }
  SUBCASE("empty pair set not applicable") {
    ProbDPProblem prob{{}, pdiv};
    CHECK(!prob_reduction_pair_processor(prob, opts, DegreeMode::Linear));
  }
  SUBCASE("tuple duplication forces coefficient 3 on s") {
    PTRS sharp = load_corpus("sharp3");
    auto sdts = dtuples(sharp);
    REQUIRE(sdts.size() == 1);
    ProbDPProblem prob{sdts, sharp.with_rules({})};
    CHECK(!prob_reduction_pair_processor(prob, opts, DegreeMode::Linear));
    SolverOptions wide = opts;
    wide.coeff_bound = 3;
    auto res = prob_reduction_pair_processor(prob, wide, DegreeMode::Linear);
    REQUIRE(res);
    int s_sym = sharp.sig().find_symbol("s");
    CHECK(res->interp.symbols.at(s_sym).coeffs.at({0}).constant_value() == 3);
  }
}

TEST_CASE("probability removal") {
  SUBCASE("deterministic analog of pdiv reduces to the classic proof") {
    PTRS det = parse_ptrs(
        "(VAR x y)\n(RULES\n  minus(x, 0) -> x\n  minus(s(x), s(y)) -> minus(x, y)\n"
        "  div(0, s(y)) -> 0\n  div(s(x), s(y)) -> s(div(minus(x, y), s(y)))\n)",
        "detdiv");
    auto dts = dtuples(det);
    ProbDPProblem prob{dts, det};
    auto classic = probability_removal(prob);
    REQUIRE(classic);
    CHECK(classic->pairs.size() == 3);  // c2 tuple contributes two pairs, c1 one
    ProveOptions popts;
    popts.solver.coeff_bound = 2;
    CHECK(prove_iterm_problem(*classic, popts).proved);
  }
  SUBCASE("not applicable with genuine probabilities") {
    PTRS pdiv = load_corpus("pdiv");
    CHECK(!probability_removal(ProbDPProblem{dtuples(pdiv), pdiv}));
  }
}

TEST_CASE("iAST driver end-to-end") {
  ProveOptions opts;
  opts.solver.coeff_bound = 2;

  SUBCASE("pdiv") {
    PTRS pdiv = load_corpus("pdiv");
    ProbOutcome oc = prove_iast(pdiv, opts);
    CHECK(oc.proved);
    // certificate round-trips and re-validates
    std::string json = certificate_json_dp(pdiv, oc);
    CheckReport rep = validate_certificate_json(pdiv, json);
    INFO(rep.failure);
    CHECK(rep.ok);
  }
  SUBCASE("the h-variants have identical tuple structure and both prove") {
    PTRS r1p = load_corpus("r1p");
    PTRS r2p = load_corpus("r2p");
    auto d1 = dtuples(r1p);
    auto d2 = dtuples(r2p);
    REQUIRE(d1.size() == d2.size());
    for (size_t i = 0; i < d1.size(); ++i) {
      // proj1 sides print identically
      std::string a = print_dtuple(d1[i], r1p.sig());
      std::string b = print_dtuple(d2[i], r2p.sig());
      CHECK(a.substr(0, a.find(" -> ")) == b.substr(0, b.find(" -> ")));
    }
    CHECK(prove_iast(r1p, opts).proved);
    CHECK(prove_iast(r2p, opts).proved);
  }
  SUBCASE("incompl stays unknown in the tuple framework") {
    PTRS inc = load_corpus("incompl");
    CHECK(!prove_iast(inc, opts).proved);
  }
  SUBCASE("trivial loop") {
    PTRS loop = load_corpus("loop");
    CHECK(!prove_iast(loop, opts).proved);
  }
}

TEST_CASE("probability removal equivalence on deterministic corpus systems") {
  ProveOptions opts;
  opts.solver.coeff_bound = 2;
  for (const char* name : {"div", "minus", "sharp3", "loop"}) {
    PTRS sys = load_corpus(name);
    REQUIRE(sys.deterministic());
    bool via_iast = prove_iast(sys, opts).proved;
    Trs trs = Trs::from_classified(sys.sig_ptr(), np(sys));
    bool via_iterm = prove_iterm(trs, opts).proved;
    INFO(name);
    CHECK(via_iast == via_iterm);
  }
}
