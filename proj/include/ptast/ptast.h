/* ptast — almost-sure termination analysis for probabilistic term rewrite
 * systems. C API over the C++ core: opaque handles, integer status codes,
 * strings owned by the library and released with ptast_string_free. */

#ifndef PTAST_H
#define PTAST_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PTAST_API __declspec(dllexport)
#else
#define PTAST_API __attribute__((visibility("default")))
#endif

typedef struct ptast_system ptast_system;
typedef struct ptast_result ptast_result;

typedef enum {
  PTAST_OK = 0,
  PTAST_ERR_PARSE = 1,
  PTAST_ERR_INVALID_ARG = 2,
  PTAST_ERR_RESOURCE = 3,
  PTAST_ERR_IO = 4,
  PTAST_ERR_INTERNAL = 5
} ptast_status;

typedef enum {
  PTAST_VERDICT_PROVED = 0,
  PTAST_VERDICT_UNKNOWN = 1
} ptast_verdict;

typedef struct {
  long long coeff_bound;        /* >= 1, default 2 */
  int multilinear;              /* 0 = linear templates, 1 = multilinear */
  unsigned timeout_ms;          /* 0 = no deadline */
  unsigned long long node_budget; /* 0 = default / PTAST_NODE_BUDGET */
} ptast_prove_options;

PTAST_API void ptast_prove_options_init(ptast_prove_options* opts);

/* Message describing the most recent failure in this thread. */
PTAST_API const char* ptast_last_error(void);

PTAST_API void ptast_string_free(char* s);

/* --- systems ------------------------------------------------------------- */

PTAST_API ptast_status ptast_system_parse(const char* text, const char* name,
                                          ptast_system** out);
PTAST_API ptast_status ptast_system_from_file(const char* path, ptast_system** out);
PTAST_API void ptast_system_free(ptast_system* sys);

PTAST_API char* ptast_system_print(const ptast_system* sys); /* canonical format */
PTAST_API int ptast_system_is_deterministic(const ptast_system* sys);

/* --- proving ------------------------------------------------------------- */

/* Probabilistic dependency pair framework (property iAST). */
PTAST_API ptast_status ptast_prove_iast(const ptast_system* sys,
                                        const ptast_prove_options* opts,
                                        ptast_result** out);
/* Direct polynomial-interpretation criterion (property AST). */
PTAST_API ptast_status ptast_prove_ast_direct(const ptast_system* sys,
                                              const ptast_prove_options* opts,
                                              ptast_result** out);
/* Classic innermost termination of the non-probabilistic variant np(R);
 * rejects systems with genuine probabilities (property iTerm). */
PTAST_API ptast_status ptast_prove_iterm(const ptast_system* sys,
                                         const ptast_prove_options* opts,
                                         ptast_result** out);

PTAST_API ptast_verdict ptast_result_verdict(const ptast_result* res);
PTAST_API const char* ptast_result_property(const ptast_result* res);
PTAST_API char* ptast_result_report(const ptast_result* res);
PTAST_API char* ptast_result_certificate_json(const ptast_result* res);
PTAST_API void ptast_result_free(ptast_result* res);

/* Replays a serialized certificate against the system. Returns PTAST_OK when
 * the certificate validates; details via ptast_last_error otherwise. */
PTAST_API ptast_status ptast_certificate_validate(const ptast_system* sys,
                                                  const char* certificate_json);

/* --- analysis ------------------------------------------------------------ */

/* Dependency tuples (probabilistic systems) or dependency pairs
 * (deterministic systems), one per line. */
PTAST_API char* ptast_analyze_pairs(const ptast_system* sys);
PTAST_API char* ptast_dependency_graph_dot(const ptast_system* sys);
/* Writes one SMT-LIB file per reduction-pair stage encountered during a DP
 * proof attempt into the directory. */
PTAST_API ptast_status ptast_emit_smt(const ptast_system* sys,
                                      const ptast_prove_options* opts, const char* dir);

/* --- simulation ------------------------------------------------------------ */

/* Exact normal-form masses |mu_0| .. |mu_depth| under the deterministic
 * leftmost-innermost strategy; rows "n<TAB>p/q\n". max_entries 0 selects the
 * default cap of 10^6 merged entries. */
PTAST_API ptast_status ptast_simulate_exact(const ptast_system* sys, const char* term,
                                            unsigned depth, size_t max_entries, char** out_table);
/* Monte-Carlo estimate of the probability of normalization within max_steps. */
PTAST_API ptast_status ptast_simulate_mc(const ptast_system* sys, const char* term,
                                         unsigned max_steps, unsigned samples, uint64_t seed,
                                         double* out_estimate, unsigned long long* out_hits);

#ifdef __cplusplus
}
#endif

#endif /* PTAST_H */
