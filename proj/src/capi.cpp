#include "ptast/ptast.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "certificate.hpp"
#include "dp_prob.hpp"
#include "rewrite.hpp"
#include "smt.hpp"

using namespace ptast;

struct ptast_system {
  PTRS sys;
};

struct ptast_result {
  std::string property;  // "iAST" | "AST" | "iTerm"
  bool proved = false;
  std::string report;
  std::string certificate;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ptast_status fail(ptast_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <typename F>
ptast_status guarded(F&& f) {
  try {
    return f();
  } catch (const parse_error& e) {
    return fail(PTAST_ERR_PARSE, e.what());
  } catch (const resource_error& e) {
    return fail(PTAST_ERR_RESOURCE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PTAST_ERR_INVALID_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(PTAST_ERR_INTERNAL, e.what());
  }
}

ProveOptions to_prove_options(const ptast_prove_options* opts) {
  ProveOptions out;
  ptast_prove_options def;
  ptast_prove_options_init(&def);
  if (!opts) opts = &def;
  out.solver.coeff_bound = opts->coeff_bound >= 1 ? opts->coeff_bound : 2;
  out.solver.node_budget = opts->node_budget ? opts->node_budget : default_node_budget();
  if (opts->timeout_ms)
    out.solver.deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(opts->timeout_ms);
  out.degree = opts->multilinear ? DegreeMode::Multilinear : DegreeMode::Linear;
  return out;
}

}  // namespace

extern "C" {

void ptast_prove_options_init(ptast_prove_options* opts) {
  if (!opts) return;
  opts->coeff_bound = 2;
  opts->multilinear = 0;
  opts->timeout_ms = 60000;
  opts->node_budget = 0;
}

const char* ptast_last_error(void) { return g_last_error.c_str(); }

void ptast_string_free(char* s) { std::free(s); }

ptast_status ptast_system_parse(const char* text, const char* name, ptast_system** out) {
  if (!text || !out) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto sys = std::make_unique<ptast_system>();
    sys->sys = parse_ptrs(text, name ? name : "");
    *out = sys.release();
    return PTAST_OK;
  });
}

ptast_status ptast_system_from_file(const char* path, ptast_system** out) {
  if (!path || !out) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  std::ifstream in(path);
  if (!in) return fail(PTAST_ERR_IO, std::string("cannot open '") + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = std::filesystem::path(path).stem().string();
  return ptast_system_parse(buf.str().c_str(), name.c_str(), out);
}

void ptast_system_free(ptast_system* sys) { delete sys; }

char* ptast_system_print(const ptast_system* sys) {
  if (!sys) return nullptr;
  return dup_string(print_ptrs(sys->sys));
}

int ptast_system_is_deterministic(const ptast_system* sys) {
  return sys && sys->sys.deterministic() ? 1 : 0;
}

ptast_status ptast_prove_iast(const ptast_system* sys, const ptast_prove_options* opts,
                              ptast_result** out) {
  if (!sys || !out) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ProveOptions po = to_prove_options(opts);
    ProbOutcome oc = prove_iast(sys->sys, po);
    auto res = std::make_unique<ptast_result>();
    res->property = "iAST";
    res->proved = oc.proved;
    std::ostringstream rep;
    rep << (oc.proved ? "Proved" : "Unknown") << " (iAST"
        << (oc.proved ? "" : ": " + oc.note) << ")";
    res->report = rep.str();
    res->certificate = certificate_json_dp(sys->sys, oc);
    *out = res.release();
    return PTAST_OK;
  });
}

ptast_status ptast_prove_ast_direct(const ptast_system* sys, const ptast_prove_options* opts,
                                    ptast_result** out) {
  if (!sys || !out) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ProveOptions po = to_prove_options(opts);
    std::optional<DirectProof> proof =
        prove_ast_direct(sys->sys, po.solver, po.degree);
    if (!proof && po.escalate_degree && po.degree == DegreeMode::Linear)
      proof = prove_ast_direct(sys->sys, po.solver, DegreeMode::Multilinear);
    auto res = std::make_unique<ptast_result>();
    res->property = "AST";
    res->proved = proof.has_value();
    res->report = proof ? "Proved (AST)" : "Unknown (AST: no interpretation found)";
    res->certificate = certificate_json_direct(sys->sys, proof);
    *out = res.release();
    return PTAST_OK;
  });
}

ptast_status ptast_prove_iterm(const ptast_system* sys, const ptast_prove_options* opts,
                               ptast_result** out) {
  if (!sys || !out) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  if (!sys->sys.deterministic())
    return fail(PTAST_ERR_INVALID_ARG, "iTerm analysis needs a deterministic system");
  return guarded([&] {
    ProveOptions po = to_prove_options(opts);
    Trs trs = Trs::from_classified(sys->sys.sig_ptr(), np(sys->sys));
    ClassicOutcome oc = prove_iterm(trs, po);
    auto res = std::make_unique<ptast_result>();
    res->property = "iTerm";
    res->proved = oc.proved;
    res->report = oc.proved ? "Proved (iTerm)" : "Unknown (iTerm: " + oc.note + ")";
    res->certificate = "";
    *out = res.release();
    return PTAST_OK;
  });
}

ptast_verdict ptast_result_verdict(const ptast_result* res) {
  return res && res->proved ? PTAST_VERDICT_PROVED : PTAST_VERDICT_UNKNOWN;
}

const char* ptast_result_property(const ptast_result* res) {
  return res ? res->property.c_str() : "";
}

char* ptast_result_report(const ptast_result* res) {
  return res ? dup_string(res->report) : nullptr;
}

char* ptast_result_certificate_json(const ptast_result* res) {
  return res ? dup_string(res->certificate) : nullptr;
}

void ptast_result_free(ptast_result* res) { delete res; }

ptast_status ptast_certificate_validate(const ptast_system* sys, const char* certificate_json) {
  if (!sys || !certificate_json) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    CheckReport rep = validate_certificate_json(sys->sys, certificate_json);
    if (!rep.ok) return fail(PTAST_ERR_INVALID_ARG, "certificate invalid: " + rep.failure);
    return PTAST_OK;
  });
}

char* ptast_analyze_pairs(const ptast_system* sys) {
  if (!sys) return nullptr;
  try {
    std::ostringstream os;
    if (sys->sys.deterministic()) {
      Trs trs = Trs::from_classified(sys->sys.sig_ptr(), np(sys->sys));
      for (const DependencyPair& p : dependency_pairs(trs))
        os << print_pair(p, *trs.sig) << "\n";
    } else {
      for (const CoupledDT& dt : dtuples(sys->sys)) os << print_dtuple(dt, sys->sys.sig()) << "\n";
    }
    return dup_string(os.str());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

char* ptast_dependency_graph_dot(const ptast_system* sys) {
  if (!sys) return nullptr;
  try {
    if (sys->sys.deterministic()) {
      Trs trs = Trs::from_classified(sys->sys.sig_ptr(), np(sys->sys));
      return dup_string(classic_graph_dot(dependency_pairs(trs), trs));
    }
    return dup_string(prob_graph_dot(dtuples(sys->sys), sys->sys));
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

ptast_status ptast_emit_smt(const ptast_system* sys, const ptast_prove_options* opts,
                            const char* dir) {
  if (!sys || !dir) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::filesystem::create_directories(dir);
    ProveOptions po = to_prove_options(opts);
    size_t counter = 0;
    po.emit_constraints = [&](const std::string& stage, const ConstraintSet& cs) {
      std::ostringstream name;
      name << (sys->sys.name().empty() ? "system" : sys->sys.name()) << "_" << stage << "_"
           << ++counter << ".smt2";
      ConstraintSet annotated = cs;
      annotated.source = "system " + sys->sys.name() + ", stage " + stage + " #" +
                         std::to_string(counter);
      std::ofstream out(std::filesystem::path(dir) / name.str());
      out << smt_export(annotated);
    };
    (void)prove_iast(sys->sys, po);
    return PTAST_OK;
  });
}

ptast_status ptast_simulate_exact(const ptast_system* sys, const char* term, unsigned depth,
                                  size_t max_entries, char** out_table) {
  if (!sys || !term || !out_table) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    Term t = parse_term_over(term, sys->sys.sig_mut());
    LiftOptions lo;
    if (max_entries) lo.max_entries = max_entries;
    std::vector<Rational> masses = lift_exact(t, sys->sys, depth, lo);
    std::ostringstream os;
    for (size_t n = 0; n < masses.size(); ++n) os << n << "\t" << rat_str(masses[n]) << "\n";
    *out_table = dup_string(os.str());
    return PTAST_OK;
  });
}

ptast_status ptast_simulate_mc(const ptast_system* sys, const char* term, unsigned max_steps,
                               unsigned samples, uint64_t seed, double* out_estimate,
                               unsigned long long* out_hits) {
  if (!sys || !term || !out_estimate) return fail(PTAST_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    Term t = parse_term_over(term, sys->sys.sig_mut());
    McResult r = mc_estimate(t, sys->sys, max_steps, samples, seed);
    *out_estimate = r.estimate();
    if (out_hits) *out_hits = r.hits;
    return PTAST_OK;
  });
}

}  // extern "C"
