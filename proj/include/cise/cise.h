/*
 * cise — conflict analysis for replicated-database applications.
 *
 * C API over the analyzer core: opaque handles, status codes, and
 * caller-freed strings. All functions are thread-safe as long as each handle
 * is used from one thread at a time; `cise_last_error` is per-thread.
 */
#ifndef CISE_H
#define CISE_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CISE_API __declspec(dllexport)
#else
#define CISE_API __attribute__((visibility("default")))
#endif

typedef struct cise_spec cise_spec;
typedef struct cise_tokens cise_tokens;
typedef struct cise_report cise_report;

typedef enum cise_status {
  CISE_OK = 0,
  CISE_ERROR_PARSE = 1,    /* spec text/file did not parse or typecheck */
  CISE_ERROR_TOKENS = 2,   /* token system invalid against the spec */
  CISE_ERROR_CONFIG = 3,   /* bounds/domain configuration rejected */
  CISE_ERROR_IO = 4,       /* file not readable / not writable */
  CISE_ERROR_ARGUMENT = 5, /* bad argument (null handle, unknown name, ...) */
  CISE_ERROR_INTERNAL = 6,
} cise_status;

/* Message for the last failure on this thread; valid until the next call. */
CISE_API const char* cise_last_error(void);

/* Frees any string returned through a char** out-parameter. */
CISE_API void cise_string_free(char* s);

/* ---- specifications (.cise) ---- */

CISE_API cise_status cise_spec_parse(const char* text, const char* filename,
                                     cise_spec** out);
CISE_API cise_status cise_spec_parse_file(const char* path, cise_spec** out);
CISE_API void cise_spec_free(cise_spec* spec);
CISE_API int cise_spec_op_count(const cise_spec* spec);
CISE_API const char* cise_spec_op_name(const cise_spec* spec, int index);

/* ---- token systems (.tok) ---- */

CISE_API cise_status cise_tokens_parse(const cise_spec* spec, const char* text,
                                       const char* filename, cise_tokens** out);
CISE_API cise_status cise_tokens_parse_file(const cise_spec* spec, const char* path,
                                            cise_tokens** out);
CISE_API void cise_tokens_free(cise_tokens* tokens);

/* ---- analysis ---- */

typedef struct cise_analyze_opts {
  long long bound_min; /* inclusive interval for bounded domains */
  long long bound_max;
  int domain_cap; /* maximum interval size; 0 = default (4) */
  int threads;    /* worker threads for task discharge; 0 = auto */
} cise_analyze_opts;

CISE_API cise_status cise_analyze(const cise_spec* spec,
                                  const cise_tokens* tokens /* nullable */,
                                  const cise_analyze_opts* opts, cise_report** out);

CISE_API int cise_report_has_conflicts(const cise_report* report);
/* 1 sound, 0 not sound, -1 when the run had no token system. */
CISE_API int cise_report_tokens_sound(const cise_report* report);
CISE_API cise_status cise_report_render(const cise_report* report, int as_json,
                                        char** out_text);
CISE_API void cise_report_free(cise_report* report);

/* ---- strongest postcondition ---- */

CISE_API cise_status cise_sp(const cise_spec* spec, const char* op_name, int force,
                             char** out_formula);

/* ---- SMT-LIB export and optional solver hook ---- */

CISE_API cise_status cise_emit_smt(const cise_spec* spec,
                                   const cise_tokens* tokens /* nullable */,
                                   const char* dir, int* out_script_count);

/* Runs `solver_cmd <file>` per generated script and compares verdicts with
 * the bounded checker. out_disagreements counts goals where they differ. */
CISE_API cise_status cise_smt_agreement(const cise_spec* spec,
                                        const cise_tokens* tokens /* nullable */,
                                        const cise_analyze_opts* opts,
                                        const char* solver_cmd, char** out_summary,
                                        int* out_disagreements);

/* ---- remove-wins-set convergence simulator ---- */

CISE_API cise_status cise_crdt_sim_file(const char* path, int verbose,
                                        char** out_report, int* out_converged);
CISE_API cise_status cise_crdt_sim_random(unsigned seed, int runs, int replicas,
                                          int max_events, long long elem_min,
                                          long long elem_max, char** out_report,
                                          int* out_all_converged);

#ifdef __cplusplus
}
#endif
#endif /* CISE_H */
