#include "cise/cise.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "analysis.hpp"
#include "crdt.hpp"
#include "parser.hpp"
#include "report.hpp"
#include "smt.hpp"
#include "sp.hpp"
#include "tokens.hpp"

using namespace cise;

struct cise_spec {
  Spec spec;
};

struct cise_tokens {
  TokenSystem tokens;
};

struct cise_report {
  Spec spec;  // reports render against the spec's field layout
  ConflictReport report;
};

namespace {

thread_local std::string g_last_error;

cise_status fail(cise_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

cise_status fail_diags(cise_status code, const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (size_t i = 0; i < diags.size(); ++i) {
    if (i) os << "\n";
    os << diags[i].str();
  }
  return fail(code, os.str());
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool read_file(const char* path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  *out = os.str();
  return true;
}

DomainBounds bounds_from(const cise_analyze_opts* opts) {
  DomainBounds b;
  if (opts) {
    b.lo = opts->bound_min;
    b.hi = opts->bound_max;
    if (opts->domain_cap > 0) b.cap = opts->domain_cap;
  }
  return b;
}

}  // namespace

extern "C" {

const char* cise_last_error(void) { return g_last_error.c_str(); }

void cise_string_free(char* s) { std::free(s); }

cise_status cise_spec_parse(const char* text, const char* filename, cise_spec** out) {
  if (!text || !out) return fail(CISE_ERROR_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    ParseResult r = parse_spec(text, filename ? filename : "<input>");
    if (!r.ok()) return fail_diags(CISE_ERROR_PARSE, r.diagnostics);
    *out = new cise_spec{std::move(*r.spec)};
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

cise_status cise_spec_parse_file(const char* path, cise_spec** out) {
  if (!path || !out) return fail(CISE_ERROR_ARGUMENT, "null argument");
  std::string text;
  if (!read_file(path, &text))
    return fail(CISE_ERROR_IO, std::string("cannot read ") + path);
  return cise_spec_parse(text.c_str(), path, out);
}

void cise_spec_free(cise_spec* spec) { delete spec; }

int cise_spec_op_count(const cise_spec* spec) {
  return spec ? static_cast<int>(spec->spec.ops.size()) : 0;
}

const char* cise_spec_op_name(const cise_spec* spec, int index) {
  if (!spec || index < 0 || index >= static_cast<int>(spec->spec.ops.size()))
    return nullptr;
  return spec->spec.ops[static_cast<size_t>(index)].name.c_str();
}

cise_status cise_tokens_parse(const cise_spec* spec, const char* text,
                              const char* filename, cise_tokens** out) {
  if (!spec || !text || !out) return fail(CISE_ERROR_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    TokenParseResult r =
        parse_tokens(text, spec->spec, filename ? filename : "<tokens>");
    if (!r.ok()) return fail_diags(CISE_ERROR_TOKENS, r.diagnostics);
    *out = new cise_tokens{std::move(*r.tokens)};
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

cise_status cise_tokens_parse_file(const cise_spec* spec, const char* path,
                                   cise_tokens** out) {
  if (!spec || !path || !out) return fail(CISE_ERROR_ARGUMENT, "null argument");
  std::string text;
  if (!read_file(path, &text))
    return fail(CISE_ERROR_IO, std::string("cannot read ") + path);
  return cise_tokens_parse(spec, text.c_str(), path, out);
}

void cise_tokens_free(cise_tokens* tokens) { delete tokens; }

cise_status cise_analyze(const cise_spec* spec, const cise_tokens* tokens,
                         const cise_analyze_opts* opts, cise_report** out) {
  if (!spec || !out) return fail(CISE_ERROR_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    AnalysisOptions options;
    options.bounds = bounds_from(opts);
    if (opts) options.check.threads = opts->threads;
    if (!options.bounds.valid())
      return fail(CISE_ERROR_CONFIG,
                  "invalid bounds: interval size exceeds the domain cap");
    ConflictReport report =
        run_analysis(spec->spec, tokens ? &tokens->tokens : nullptr, options);
    *out = new cise_report{spec->spec, std::move(report)};
    return CISE_OK;
  } catch (const ConfigError& e) {
    return fail(CISE_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

int cise_report_has_conflicts(const cise_report* report) {
  return report && report->report.has_conflicts ? 1 : 0;
}

int cise_report_tokens_sound(const cise_report* report) {
  if (!report || !report->report.tokens_present) return -1;
  return report->report.sound ? 1 : 0;
}

cise_status cise_report_render(const cise_report* report, int as_json,
                               char** out_text) {
  if (!report || !out_text) return fail(CISE_ERROR_ARGUMENT, "null argument");
  try {
    std::string text = as_json ? report_json(report->spec, report->report)
                               : report_text(report->spec, report->report);
    *out_text = dup_string(text);
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

void cise_report_free(cise_report* report) { delete report; }

cise_status cise_sp(const cise_spec* spec, const char* op_name, int force,
                    char** out_formula) {
  if (!spec || !op_name || !out_formula)
    return fail(CISE_ERROR_ARGUMENT, "null argument");
  try {
    SpForOpResult r = sp_for_op(spec->spec, op_name, force != 0);
    if (!r.formula) return fail(CISE_ERROR_ARGUMENT, r.error);
    *out_formula = dup_string(sp_print(spec->spec, op_name, r.formula));
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

cise_status cise_emit_smt(const cise_spec* spec, const cise_tokens* tokens,
                          const char* dir, int* out_script_count) {
  if (!spec || !dir) return fail(CISE_ERROR_ARGUMENT, "null argument");
  try {
    GeneratedTasks gen =
        generate_all_tasks(spec->spec, tokens ? &tokens->tokens : nullptr);
    std::vector<std::string> files = emit_to_directory(spec->spec, gen.tasks, dir);
    if (out_script_count) *out_script_count = static_cast<int>(files.size());
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_IO, e.what());
  }
}

cise_status cise_smt_agreement(const cise_spec* spec, const cise_tokens* tokens,
                               const cise_analyze_opts* opts, const char* solver_cmd,
                               char** out_summary, int* out_disagreements) {
  if (!spec || !solver_cmd) return fail(CISE_ERROR_ARGUMENT, "null argument");
  try {
    DomainBounds bounds = bounds_from(opts);
    if (!bounds.valid()) return fail(CISE_ERROR_CONFIG, "invalid bounds");
    CheckConfig cfg;
    if (opts) cfg.threads = opts->threads;
    GeneratedTasks gen =
        generate_all_tasks(spec->spec, tokens ? &tokens->tokens : nullptr);
    std::vector<AgreementRow> rows =
        smt_agreement(spec->spec, gen.tasks, bounds, solver_cmd, cfg);

    int disagreements = 0;
    std::ostringstream os;
    for (const auto& r : rows) {
      const char* verdict = r.solver == SolverVerdict::Unsat   ? "unsat"
                            : r.solver == SolverVerdict::Sat   ? "sat"
                            : r.solver == SolverVerdict::Unknown ? "unknown"
                                                                 : "error";
      bool counts = r.solver == SolverVerdict::Unsat || r.solver == SolverVerdict::Sat;
      if (counts && !r.agree) ++disagreements;
      os << (r.agree ? "agree   " : (counts ? "DISAGREE" : "skipped ")) << "  "
         << r.task << " / " << r.goal << ": checker="
         << (r.checker_passed ? "pass" : "counterexample") << " solver=" << verdict
         << "\n";
    }
    if (out_summary) *out_summary = dup_string(os.str());
    if (out_disagreements) *out_disagreements = disagreements;
    return CISE_OK;
  } catch (const ConfigError& e) {
    return fail(CISE_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

cise_status cise_crdt_sim_file(const char* path, int verbose, char** out_report,
                               int* out_converged) {
  if (!path) return fail(CISE_ERROR_ARGUMENT, "null argument");
  std::string text;
  if (!read_file(path, &text))
    return fail(CISE_ERROR_IO, std::string("cannot read ") + path);
  try {
    ScenarioParseResult parsed = parse_scenario(text);
    if (!parsed.scenario)
      return fail(CISE_ERROR_PARSE, std::string(path) + ":" +
                                        std::to_string(parsed.line) + ": " +
                                        parsed.error);
    SimResult r = simulate(*parsed.scenario);
    if (!r.ok()) return fail(CISE_ERROR_ARGUMENT, r.error);

    std::ostringstream os;
    if (verbose)
      for (const auto& line : r.history) os << line << "\n";
    os << (r.converged ? "converged" : "DIVERGED") << " (" << r.finals.size()
       << " replicas)\n";
    if (out_report) *out_report = dup_string(os.str());
    if (out_converged) *out_converged = r.converged ? 1 : 0;
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

cise_status cise_crdt_sim_random(unsigned seed, int runs, int replicas, int max_events,
                                 long long elem_min, long long elem_max,
                                 char** out_report, int* out_all_converged) {
  if (runs < 1 || replicas < 1 || max_events < 1 || elem_min > elem_max)
    return fail(CISE_ERROR_ARGUMENT, "invalid simulation parameters");
  try {
    std::ostringstream os;
    int diverged = 0;
    for (int i = 0; i < runs; ++i) {
      unsigned s = seed + static_cast<unsigned>(i);
      Scenario sc = random_scenario(s, replicas, max_events, elem_min, elem_max);
      SimResult r = simulate(sc);
      if (!r.ok()) return fail(CISE_ERROR_INTERNAL, r.error);
      if (!r.converged) {
        ++diverged;
        os << "seed " << s << ": DIVERGED\n";
      }
    }
    os << runs << " runs, " << (runs - diverged) << " converged, " << diverged
       << " diverged\n";
    if (out_report) *out_report = dup_string(os.str());
    if (out_all_converged) *out_all_converged = diverged == 0 ? 1 : 0;
    return CISE_OK;
  } catch (const std::exception& e) {
    return fail(CISE_ERROR_INTERNAL, e.what());
  }
}

}  // extern "C"
