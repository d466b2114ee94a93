#include <doctest.h>

#include "helpers.hpp"

using namespace ptast;
using namespace ptast::test;

TEST_CASE("parsing") {
  SUBCASE("probabilistic rule") {
    PTRS rw = parse_ptrs("(VAR x)\n(RULES g(x) -> {1/2 : x, 1/2 : g(g(x))})", "rw");
    REQUIRE(rw.rules().size() == 1);
    CHECK(rw.rules()[0].rhs.size() == 2);
    CHECK(rw.rules()[0].rhs.entries()[0].first == make_rational(1, 2));
  }
  SUBCASE("deterministic sugar") {
    PTRS m = parse_ptrs("(VAR x)\n(RULES minus(x, 0) -> x)");
    REQUIRE(m.rules().size() == 1);
    CHECK(m.rules()[0].rhs.size() == 1);
    CHECK(m.rules()[0].rhs.entries()[0].first == Rational(1));
  }
  SUBCASE("probability mass violation") {
    CHECK_THROWS_AS(parse_ptrs("(VAR x)\n(RULES g(x) -> {1/2 : x, 1/3 : g(x)})"), parse_error);
  }
  SUBCASE("variable left-hand side") {
    CHECK_THROWS_AS(parse_ptrs("(VAR x)\n(RULES x -> x)"), parse_error);
  }
  SUBCASE("variable scope") {
    CHECK_THROWS_AS(parse_ptrs("(VAR x y)\n(RULES f(x) -> y)"), parse_error);
  }
  SUBCASE("arity consistency") {
    CHECK_THROWS_AS(parse_ptrs("(VAR x)\n(RULES f(x) -> f(x, x))"), parse_error);
  }
  SUBCASE("reserved compound names") {
    CHECK_THROWS_AS(parse_ptrs("(RULES c2 -> c2)"), parse_error);
  }
  SUBCASE("error location") {
    try {
      parse_ptrs("(RULES\n  a -> [)\n)");
      FAIL("expected parse error");
    } catch (const parse_error& e) {
      CHECK(e.line == 2);
    }
  }
}

TEST_CASE("round trip through the canonical printer") {
  for (const char* name : {"div", "rw", "r1", "r2", "r1p", "r2p", "r3", "pdiv", "qs", "bogo",
                           "incompl", "loop", "loopxy", "sharp3", "walk2", "minus"}) {
    PTRS sys = load_corpus(name);
    PTRS back = parse_ptrs(print_ptrs(sys), name);
    REQUIRE(back.rules().size() == sys.rules().size());
    CHECK(print_ptrs(back) == print_ptrs(sys));
    for (size_t i = 0; i < sys.rules().size(); ++i)
      CHECK(print_rule(back.rules()[i], back.sig()) == print_rule(sys.rules()[i], sys.sig()));
  }
}

TEST_CASE("symbol classification") {
  SUBCASE("div") {
    PTRS div = load_corpus("div");
    std::vector<std::string> defined, ctors;
    for (int s : div.defined_symbols()) defined.push_back(div.sig().symbol(s).name);
    for (int s : div.constructor_symbols()) ctors.push_back(div.sig().symbol(s).name);
    CHECK(defined == std::vector<std::string>{"minus", "div"});
    CHECK(ctors == std::vector<std::string>{"0", "s"});
  }
  SUBCASE("rw") {
    PTRS rw = load_corpus("rw");
    CHECK(rw.defined_symbols().size() == 1);
    CHECK(rw.sig().symbol(rw.defined_symbols()[0]).name == "g");
  }
  SUBCASE("empty system") {
    PTRS empty = parse_ptrs("(RULES)");
    CHECK(empty.defined_symbols().empty());
    CHECK(empty.constructor_symbols().empty());
  }
}

TEST_CASE("non-probabilistic variant") {
  SUBCASE("rw") {
    PTRS rw = load_corpus("rw");
    auto rules = np(rw);
    REQUIRE(rules.size() == 2);
    CHECK(term_str(rules[0].rhs, rw.sig()) == "x");
    CHECK(term_str(rules[1].rhs, rw.sig()) == "g(g(x))");
  }
  SUBCASE("deterministic system unchanged") {
    PTRS div = load_corpus("div");
    auto rules = np(div);
    REQUIRE(rules.size() == div.rules().size());
    for (size_t i = 0; i < rules.size(); ++i) {
      CHECK(rules[i].lhs == div.rules()[i].lhs);
      CHECK(rules[i].rhs == div.rules()[i].rhs.entries()[0].second);
    }
  }
  SUBCASE("r2") {
    PTRS r2 = load_corpus("r2");
    auto rules = np(r2);
    REQUIRE(rules.size() == 2);
    CHECK(term_str(rules[0].rhs, r2.sig()) == "0");
    CHECK(term_str(rules[1].rhs, r2.sig()) == "f(g, g, g)");
  }
  SUBCASE("entry count") {
    for (const char* name : {"rw", "pdiv", "qs", "bogo"}) {
      PTRS sys = load_corpus(name);
      size_t expect = 0;
      for (const ProbRule& r : sys.rules()) expect += r.rhs.size();
      CHECK(np(sys).size() == expect);
    }
  }
}

TEST_CASE("multidistribution invariants") {
  CHECK_THROWS_AS(MultiDistribution<int>({{make_rational(1, 2), 1}}), distribution_error);
  CHECK_THROWS_AS(MultiDistribution<int>({{Rational(0), 1}, {Rational(1), 2}}),
                  distribution_error);
  CHECK_THROWS_AS(MultiDistribution<int>({{make_rational(3, 2), 1}}), distribution_error);
  // duplicates stay distinct entries
  MultiDistribution<int> d({{make_rational(1, 2), 7}, {make_rational(1, 2), 7}});
  CHECK(d.size() == 2);
}
