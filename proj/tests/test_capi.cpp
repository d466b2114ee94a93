// Exercises the shared-library C surface end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "ptast/ptast.h"

namespace {

struct Sys {
  ptast_system* p = nullptr;
  ~Sys() { ptast_system_free(p); }
};

struct Res {
  ptast_result* p = nullptr;
  ~Res() { ptast_result_free(p); }
};

struct Str {
  char* p = nullptr;
  ~Str() { ptast_string_free(p); }
  std::string get() const { return p ? p : ""; }
};

std::string corpus(const char* name) {
  return std::string(PTAST_CORPUS_DIR) + "/" + name + ".ptrs";
}

}  // namespace

TEST_CASE("system lifecycle and errors") {
  SUBCASE("parse from text") {
    Sys sys;
    REQUIRE(ptast_system_parse("(VAR x)\n(RULES g(x) -> {1/2 : x, 1/2 : g(g(x))})", "rw",
                               &sys.p) == PTAST_OK);
    Str text{ptast_system_print(sys.p)};
    CHECK(text.get().find("g(x) -> {1/2 : x, 1/2 : g(g(x))}") != std::string::npos);
    CHECK(ptast_system_is_deterministic(sys.p) == 0);
  }
  SUBCASE("parse error carries a message") {
    Sys sys;
    CHECK(ptast_system_parse("(RULES g(x) -> {1/2 : x})", "bad", &sys.p) == PTAST_ERR_PARSE);
    CHECK(std::strlen(ptast_last_error()) > 0);
  }
  SUBCASE("missing file") {
    Sys sys;
    CHECK(ptast_system_from_file("/nonexistent/zzz.ptrs", &sys.p) == PTAST_ERR_IO);
  }
  SUBCASE("null arguments") {
    CHECK(ptast_system_parse(nullptr, nullptr, nullptr) == PTAST_ERR_INVALID_ARG);
  }
}

TEST_CASE("proving through the C API") {
  ptast_prove_options opts;
  ptast_prove_options_init(&opts);
  CHECK(opts.coeff_bound == 2);

  SUBCASE("dp framework on pdiv") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("pdiv").c_str(), &sys.p) == PTAST_OK);
    Res res;
    REQUIRE(ptast_prove_iast(sys.p, &opts, &res.p) == PTAST_OK);
    CHECK(ptast_result_verdict(res.p) == PTAST_VERDICT_PROVED);
    CHECK(std::string(ptast_result_property(res.p)) == "iAST");
    Str cert{ptast_result_certificate_json(res.p)};
    CHECK(ptast_certificate_validate(sys.p, cert.p) == PTAST_OK);
  }
  SUBCASE("direct criterion on the random walk") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("rw").c_str(), &sys.p) == PTAST_OK);
    Res res;
    REQUIRE(ptast_prove_ast_direct(sys.p, &opts, &res.p) == PTAST_OK);
    CHECK(ptast_result_verdict(res.p) == PTAST_VERDICT_PROVED);
    CHECK(std::string(ptast_result_property(res.p)) == "AST");
    Str cert{ptast_result_certificate_json(res.p)};
    CHECK(ptast_certificate_validate(sys.p, cert.p) == PTAST_OK);
  }
  SUBCASE("iterm needs a deterministic system") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("rw").c_str(), &sys.p) == PTAST_OK);
    Res res;
    CHECK(ptast_prove_iterm(sys.p, &opts, &res.p) == PTAST_ERR_INVALID_ARG);
  }
  SUBCASE("iterm on division") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("div").c_str(), &sys.p) == PTAST_OK);
    Res res;
    REQUIRE(ptast_prove_iterm(sys.p, &opts, &res.p) == PTAST_OK);
    CHECK(ptast_result_verdict(res.p) == PTAST_VERDICT_PROVED);
  }
  SUBCASE("tampered certificates are rejected") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("pdiv").c_str(), &sys.p) == PTAST_OK);
    Res res;
    REQUIRE(ptast_prove_iast(sys.p, &opts, &res.p) == PTAST_OK);
    Str cert{ptast_result_certificate_json(res.p)};
    std::string broken = cert.get();
    size_t pos = broken.find("\"x1\": \"1\"");
    REQUIRE(pos != std::string::npos);
    broken.replace(pos, 9, "\"x1\": \"0\"");
    CHECK(ptast_certificate_validate(sys.p, broken.c_str()) != PTAST_OK);
  }
}

TEST_CASE("analysis through the C API") {
  SUBCASE("tuples for probabilistic systems") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("pdiv").c_str(), &sys.p) == PTAST_OK);
    Str pairs{ptast_analyze_pairs(sys.p)};
    CHECK(pairs.get().find("<MINUS(x, 0), minus(x, 0)> -> {1 : <c0, x>}") != std::string::npos);
    Str dot{ptast_dependency_graph_dot(sys.p)};
    CHECK(dot.get().find("digraph") != std::string::npos);
  }
  SUBCASE("empty system has empty listings") {
    Sys sys;
    REQUIRE(ptast_system_parse("(RULES)", "empty", &sys.p) == PTAST_OK);
    Str pairs{ptast_analyze_pairs(sys.p)};
    CHECK(pairs.get().empty());
  }
  SUBCASE("classic pairs for deterministic systems") {
    Sys sys;
    REQUIRE(ptast_system_from_file(corpus("div").c_str(), &sys.p) == PTAST_OK);
    Str pairs{ptast_analyze_pairs(sys.p)};
    CHECK(pairs.get().find("DIV(s(x), s(y)) -> DIV(minus(x, y), s(y))") != std::string::npos);
  }
}

TEST_CASE("simulation through the C API") {
  Sys sys;
  REQUIRE(ptast_system_from_file(corpus("rw").c_str(), &sys.p) == PTAST_OK);
  SUBCASE("exact table") {
    Str table;
    REQUIRE(ptast_simulate_exact(sys.p, "g(0)", 3, 0, &table.p) == PTAST_OK);
    CHECK(table.get() == "0\t0\n1\t1/2\n2\t1/2\n3\t5/8\n");
  }
  SUBCASE("mc estimate determinism") {
    double a = 0, b = 0;
    unsigned long long ha = 0, hb = 0;
    REQUIRE(ptast_simulate_mc(sys.p, "g(0)", 100, 400, 7, &a, &ha) == PTAST_OK);
    REQUIRE(ptast_simulate_mc(sys.p, "g(0)", 100, 400, 7, &b, &hb) == PTAST_OK);
    CHECK(a == b);
    CHECK(ha == hb);
  }
  SUBCASE("entry cap yields a resource error") {
    Sys r2;
    REQUIRE(ptast_system_from_file(corpus("r2").c_str(), &r2.p) == PTAST_OK);
    Str table;
    CHECK(ptast_simulate_exact(r2.p, "g", 40, 100, &table.p) == PTAST_ERR_RESOURCE);
  }
  SUBCASE("bad start term") {
    Str table;
    CHECK(ptast_simulate_exact(sys.p, "g(x, y)", 2, 0, &table.p) == PTAST_ERR_PARSE);
  }
}
