#pragma once

#include "analysis.hpp"
#include "checker.hpp"

namespace cise {

// One SMT-LIB 2 script per proof goal, in negated-goal satisfiability form:
// `unsat` means the goal is valid. Integer semantics are unbounded; sets are
// encoded as characteristic functions and the program's state transitions as
// SSA-style per-call state copies.
struct SmtScript {
  std::string task_name;
  std::string goal_label;
  std::string filename;  // suggested file name, .smt2
  std::string text;
};

std::vector<SmtScript> emit_task(const Spec& spec, const AnalysisTask& task);

// Emits every task's scripts into `dir` (created when missing). Returns the
// files written.
std::vector<std::string> emit_to_directory(const Spec& spec,
                                           const std::vector<AnalysisTask>& tasks,
                                           const std::string& dir);

// ---- optional external solver hook ----

struct SolverVerdict {
  enum Kind { Unsat, Sat, Unknown, Error } kind = Error;
  std::string raw;  // first relevant output line(s)
};

// Runs `command <script-file>` and parses the first sat/unsat/unknown token.
SolverVerdict run_solver(const std::string& command, const std::string& script_text);

struct AgreementRow {
  std::string task;
  std::string goal;
  bool checker_passed = false;
  SolverVerdict::Kind solver = SolverVerdict::Error;
  bool agree = false;  // unsat<->pass, sat<->counterexample
};

// Cross-checks every goal's bounded verdict against an external solver.
std::vector<AgreementRow> smt_agreement(const Spec& spec,
                                        const std::vector<AnalysisTask>& tasks,
                                        const DomainBounds& bounds,
                                        const std::string& solver_cmd,
                                        const CheckConfig& cfg = {});

}  // namespace cise
