// Command-line front end for the cise analyzer, built purely on the public
// C API (include/cise/cise.h).

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "cise/cise.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConflicts = 1;
constexpr int kExitInputError = 2;

struct FreeString {
  char* s = nullptr;
  ~FreeString() { cise_string_free(s); }
};

int input_error(const std::string& context) {
  std::fprintf(stderr, "error: %s\n%s\n", context.c_str(), cise_last_error());
  return kExitInputError;
}

bool parse_bounds(const std::string& text, long long* lo, long long* hi) {
  auto dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    *lo = std::stoll(text.substr(0, dots));
    *hi = std::stoll(text.substr(dots + 2));
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cise — conflict analysis for replicated-database applications"};
  app.require_subcommand(1);

  // ---- analyze ----
  std::string an_spec, an_tokens, an_bounds = "0..3", an_format = "text";
  std::string an_smt_dir, an_solver;
  int an_threads = 0;
  CLI::App* analyze =
      app.add_subcommand("analyze", "run the safety/commutativity/stability analysis");
  analyze->add_option("spec", an_spec, "specification file (.cise)")->required();
  analyze->add_option("--tokens", an_tokens, "token system file (.tok)");
  analyze->add_option("--bounds", an_bounds, "integer domain, MIN..MAX (default 0..3)");
  analyze->add_option("--report", an_format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--emit-smt", an_smt_dir, "also write SMT-LIB scripts here");
  analyze->add_option("--solver", an_solver,
                      "external SMT solver command; verdicts are cross-checked");
  analyze->add_option("--threads", an_threads, "worker threads (0 = auto)");

  // ---- sp ----
  std::string sp_spec, sp_op;
  bool sp_force = false;
  CLI::App* sp = app.add_subcommand(
      "sp", "print the strongest postcondition of an operation's body");
  sp->add_option("spec", sp_spec, "specification file (.cise)")->required();
  sp->add_option("operation", sp_op, "operation name")->required();
  sp->add_flag("--force", sp_force, "allow operations that already declare ensures");

  // ---- crdt-sim ----
  std::string cs_scenario;
  std::vector<std::string> cs_random;
  unsigned cs_seed = 0;
  int cs_replicas = 3, cs_events = 100;
  bool cs_verbose = false;
  CLI::App* crdt =
      app.add_subcommand("crdt-sim", "remove-wins-set convergence simulator");
  crdt->add_option("scenario", cs_scenario, "scenario file");
  crdt->add_option("--random", cs_random,
                   "SEED COUNT: run COUNT random schedules starting at SEED")
      ->expected(2);
  CLI::Option* seed_opt =
      crdt->add_option("--seed", cs_seed, "base seed for --random runs");
  crdt->add_option("--replicas", cs_replicas, "replica count for random runs");
  crdt->add_option("--events", cs_events, "max events per random run");
  crdt->add_flag("--verbose", cs_verbose, "print the full event history");

  // ---- emit-smt ----
  std::string em_spec, em_dir, em_tokens;
  CLI::App* emit =
      app.add_subcommand("emit-smt", "write one SMT-LIB 2 script per proof goal");
  emit->add_option("spec", em_spec, "specification file (.cise)")->required();
  emit->add_option("dir", em_dir, "output directory")->required();
  emit->add_option("--tokens", em_tokens, "token system file (.tok)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  if (analyze->parsed()) {
    cise_analyze_opts opts{};
    if (!parse_bounds(an_bounds, &opts.bound_min, &opts.bound_max)) {
      std::fprintf(stderr, "error: --bounds expects MIN..MAX, got '%s'\n",
                   an_bounds.c_str());
      return kExitInputError;
    }
    opts.threads = an_threads;

    cise_spec* spec = nullptr;
    if (cise_spec_parse_file(an_spec.c_str(), &spec) != CISE_OK)
      return input_error("cannot load " + an_spec);

    cise_tokens* tokens = nullptr;
    if (!an_tokens.empty() &&
        cise_tokens_parse_file(spec, an_tokens.c_str(), &tokens) != CISE_OK) {
      cise_spec_free(spec);
      return input_error("invalid token system " + an_tokens);
    }

    cise_report* report = nullptr;
    if (cise_analyze(spec, tokens, &opts, &report) != CISE_OK) {
      cise_tokens_free(tokens);
      cise_spec_free(spec);
      return input_error("analysis failed");
    }

    FreeString text;
    if (cise_report_render(report, an_format == "json" ? 1 : 0, &text.s) == CISE_OK)
      std::fputs(text.s, stdout);

    if (!an_smt_dir.empty()) {
      int scripts = 0;
      if (cise_emit_smt(spec, tokens, an_smt_dir.c_str(), &scripts) != CISE_OK) {
        cise_report_free(report);
        cise_tokens_free(tokens);
        cise_spec_free(spec);
        return input_error("SMT emission failed");
      }
      std::fprintf(stderr, "wrote %d SMT-LIB scripts to %s\n", scripts,
                   an_smt_dir.c_str());
    }

    int exit_code;
    int sound = cise_report_tokens_sound(report);
    if (cise_report_has_conflicts(report) || sound == 0)
      exit_code = kExitConflicts;
    else
      exit_code = kExitOk;

    if (!an_solver.empty()) {
      FreeString summary;
      int disagreements = 0;
      if (cise_smt_agreement(spec, tokens, &opts, an_solver.c_str(), &summary.s,
                             &disagreements) != CISE_OK) {
        cise_report_free(report);
        cise_tokens_free(tokens);
        cise_spec_free(spec);
        return input_error("solver cross-check failed");
      }
      std::fputs(summary.s, stderr);
      if (disagreements > 0) {
        std::fprintf(stderr, "solver and bounded checker disagree on %d goal(s)\n",
                     disagreements);
        exit_code = kExitConflicts;
      }
    }

    cise_report_free(report);
    cise_tokens_free(tokens);
    cise_spec_free(spec);
    return exit_code;
  }

  if (sp->parsed()) {
    cise_spec* spec = nullptr;
    if (cise_spec_parse_file(sp_spec.c_str(), &spec) != CISE_OK)
      return input_error("cannot load " + sp_spec);
    FreeString formula;
    cise_status st = cise_sp(spec, sp_op.c_str(), sp_force ? 1 : 0, &formula.s);
    cise_spec_free(spec);
    if (st != CISE_OK) return input_error("sp failed");
    std::printf("%s\n", formula.s);
    return kExitOk;
  }

  if (crdt->parsed()) {
    if (!cs_random.empty()) {
      unsigned seed = seed_opt->count() ? cs_seed
                                        : static_cast<unsigned>(std::stoul(cs_random[0]));
      int count = std::stoi(cs_random[1]);
      FreeString report;
      int all = 0;
      if (cise_crdt_sim_random(seed, count, cs_replicas, cs_events, 0, 3, &report.s,
                               &all) != CISE_OK)
        return input_error("simulation failed");
      std::fputs(report.s, stdout);
      return all ? kExitOk : kExitConflicts;
    }
    if (cs_scenario.empty()) {
      std::fprintf(stderr, "error: provide a scenario file or --random SEED COUNT\n");
      return kExitInputError;
    }
    FreeString report;
    int converged = 0;
    if (cise_crdt_sim_file(cs_scenario.c_str(), cs_verbose ? 1 : 0, &report.s,
                           &converged) != CISE_OK)
      return input_error("cannot simulate " + cs_scenario);
    std::fputs(report.s, stdout);
    return converged ? kExitOk : kExitConflicts;
  }

  if (emit->parsed()) {
    cise_spec* spec = nullptr;
    if (cise_spec_parse_file(em_spec.c_str(), &spec) != CISE_OK)
      return input_error("cannot load " + em_spec);
    cise_tokens* tokens = nullptr;
    if (!em_tokens.empty() &&
        cise_tokens_parse_file(spec, em_tokens.c_str(), &tokens) != CISE_OK) {
      cise_spec_free(spec);
      return input_error("invalid token system " + em_tokens);
    }
    int scripts = 0;
    cise_status st = cise_emit_smt(spec, tokens, em_dir.c_str(), &scripts);
    cise_tokens_free(tokens);
    cise_spec_free(spec);
    if (st != CISE_OK) return input_error("SMT emission failed");
    std::printf("wrote %d SMT-LIB scripts to %s\n", scripts, em_dir.c_str());
    return kExitOk;
  }

  return kExitInputError;
}
