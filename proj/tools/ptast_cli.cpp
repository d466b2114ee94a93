// ptast command line: prove / simulate / analyze over the shared library API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "ptast/ptast.h"

namespace {

struct SystemHandle {
  ptast_system* sys = nullptr;
  ~SystemHandle() { ptast_system_free(sys); }
};

struct ResultHandle {
  ptast_result* res = nullptr;
  ~ResultHandle() { ptast_result_free(res); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { ptast_string_free(s); }
};

int load_system(const std::string& file, SystemHandle& h) {
  ptast_status st = ptast_system_from_file(file.c_str(), &h.sys);
  if (st != PTAST_OK) {
    std::fprintf(stderr, "error: %s\n", ptast_last_error());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptast — (almost-sure) termination analysis for probabilistic term rewriting"};
  app.require_subcommand(1);

  // prove
  std::string prove_file, method = "both", degree = "linear";
  long long coeff_bound = 2;
  unsigned timeout_ms = 60000;
  bool json_out = false;
  CLI::App* prove = app.add_subcommand("prove", "prove iAST/AST of a system");
  prove->add_option("file", prove_file, "system file")->required();
  prove->add_option("--method", method, "dp|direct|both")
      ->check(CLI::IsMember({"dp", "direct", "both"}));
  prove->add_option("--coeff-bound", coeff_bound, "coefficient search bound");
  prove->add_option("--degree", degree, "linear|multilinear")
      ->check(CLI::IsMember({"linear", "multilinear"}));
  prove->add_option("--timeout", timeout_ms, "per-method timeout in milliseconds");
  prove->add_flag("--json", json_out, "emit the proof certificate as JSON");

  // simulate
  std::string sim_file, sim_term;
  unsigned depth = 0, samples = 10000;
  unsigned long long seed = 0;
  bool exact = false, mc = false;
  CLI::App* simulate = app.add_subcommand("simulate", "rewrite-semantics simulation");
  simulate->add_option("file", sim_file, "system file")->required();
  simulate->add_option("--term", sim_term, "start term")->required();
  simulate->add_option("--depth", depth, "lifting depth / step bound")->required();
  simulate->add_flag("--exact", exact, "exact normal-form mass table");
  simulate->add_flag("--mc", mc, "Monte-Carlo estimate");
  simulate->add_option("--samples", samples, "Monte-Carlo sample count");
  simulate->add_option("--seed", seed, "Monte-Carlo seed");

  // analyze
  std::string ana_file, dot_path, smt_dir;
  CLI::App* analyze = app.add_subcommand("analyze", "dependency pairs/tuples and exports");
  analyze->add_option("file", ana_file, "system file")->required();
  analyze->add_option("--dot", dot_path, "write the dependency graph in DOT format");
  analyze->add_option("--emit-smt", smt_dir, "write SMT-LIB constraints per reduction-pair stage");

  CLI11_PARSE(app, argc, argv);

  if (prove->parsed()) {
    SystemHandle sys;
    if (load_system(prove_file, sys)) return 1;
    ptast_prove_options opts;
    ptast_prove_options_init(&opts);
    opts.coeff_bound = coeff_bound;
    opts.multilinear = degree == "multilinear" ? 1 : 0;
    opts.timeout_ms = timeout_ms;

    auto run = [&](bool dp_method, ResultHandle& r) {
      ptast_status st = dp_method ? ptast_prove_iast(sys.sys, &opts, &r.res)
                                  : ptast_prove_ast_direct(sys.sys, &opts, &r.res);
      if (st != PTAST_OK) {
        std::fprintf(stderr, "error: %s\n", ptast_last_error());
        return false;
      }
      return true;
    };

    ResultHandle result;
    bool ok;
    if (method == "dp") {
      ok = run(true, result);
    } else if (method == "direct") {
      ok = run(false, result);
    } else {
      ok = run(true, result);
      if (ok && ptast_result_verdict(result.res) != PTAST_VERDICT_PROVED) {
        ResultHandle direct;
        if (run(false, direct) && ptast_result_verdict(direct.res) == PTAST_VERDICT_PROVED) {
          std::swap(result.res, direct.res);
        }
      }
    }
    if (!ok) return 1;
    OwnedString report{ptast_result_report(result.res)};
    if (json_out) {
      OwnedString cert{ptast_result_certificate_json(result.res)};
      std::fputs(cert.s ? cert.s : "", stdout);
    } else {
      std::printf("%s: %s\n", ptast_result_property(result.res), report.s ? report.s : "");
    }
    return ptast_result_verdict(result.res) == PTAST_VERDICT_PROVED ? 0 : 2;
  }

  if (simulate->parsed()) {
    if (exact == mc) {
      std::fprintf(stderr, "error: choose exactly one of --exact or --mc\n");
      return 1;
    }
    SystemHandle sys;
    if (load_system(sim_file, sys)) return 1;
    if (exact) {
      OwnedString table;
      ptast_status st =
          ptast_simulate_exact(sys.sys, sim_term.c_str(), depth, 0, &table.s);
      if (st != PTAST_OK) {
        std::fprintf(stderr, "error: %s\n", ptast_last_error());
        return 1;
      }
      std::fputs(table.s, stdout);
      return 0;
    }
    double estimate = 0.0;
    unsigned long long hits = 0;
    ptast_status st = ptast_simulate_mc(sys.sys, sim_term.c_str(), depth, samples, seed,
                                        &estimate, &hits);
    if (st != PTAST_OK) {
      std::fprintf(stderr, "error: %s\n", ptast_last_error());
      return 1;
    }
    std::printf("estimate %.6f (%llu/%u normalized within %u steps, seed %llu)\n", estimate,
                hits, samples, depth, seed);
    return 0;
  }

  if (analyze->parsed()) {
    SystemHandle sys;
    if (load_system(ana_file, sys)) return 1;
    OwnedString pairs{ptast_analyze_pairs(sys.sys)};
    if (!pairs.s) {
      std::fprintf(stderr, "error: %s\n", ptast_last_error());
      return 1;
    }
    std::fputs(pairs.s, stdout);
    if (!dot_path.empty()) {
      OwnedString dot{ptast_dependency_graph_dot(sys.sys)};
      if (!dot.s) {
        std::fprintf(stderr, "error: %s\n", ptast_last_error());
        return 1;
      }
      FILE* f = std::fopen(dot_path.c_str(), "w");
      if (!f) {
        std::fprintf(stderr, "error: cannot write '%s'\n", dot_path.c_str());
        return 1;
      }
      std::fputs(dot.s, f);
      std::fclose(f);
    }
    if (!smt_dir.empty()) {
      ptast_prove_options opts;
      ptast_prove_options_init(&opts);
      if (ptast_emit_smt(sys.sys, &opts, smt_dir.c_str()) != PTAST_OK) {
        std::fprintf(stderr, "error: %s\n", ptast_last_error());
        return 1;
      }
    }
    return 0;
  }

  return 1;
}
