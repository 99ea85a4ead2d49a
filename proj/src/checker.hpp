#pragma once

#include <optional>

#include "analysis.hpp"
#include "eval.hpp"

namespace cise {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A falsifying assignment. Self-validating: re-evaluating the failed goal
// under these bindings yields false (enforced on construction).
struct Counterexample {
  std::string goal_label;
  std::vector<std::pair<std::string, Value>> args;  // symbolic argument values
  std::vector<StateValue> initial_states;           // one per state copy
  // States after each program call, labelled "op@stateN".
  std::vector<std::pair<std::string, StateValue>> trace;
};

struct GoalResult {
  std::string label;
  GoalRole role = GoalRole::SafetyInvariant;
  std::string subject_op;
  bool passed = true;
  std::optional<Counterexample> ce;
};

struct TaskResult {
  bool passed = true;
  bool vacuous = false;  // assumption admits zero models within bounds
  std::vector<GoalResult> goals;
  // Lexicographically first falsifying assignment across all goals
  // (variables in task order; set values ordered by characteristic bitmask).
  std::optional<Counterexample> first_ce;
};

struct CheckConfig {
  int threads = 0;  // 0: hardware concurrency, capped at 8
};

// Exhaustively discharges a task over the finite domains. Enumeration is
// deterministic (argument variables in task order, then state fields in
// declaration order, values ascending), so counterexamples are reproducible.
TaskResult check_task(const Spec& spec, const AnalysisTask& task,
                      const DomainBounds& bounds, const CheckConfig& cfg = {});

// Validity of a formula over current-state fields plus declared symbolic
// constants: passes iff no assignment within bounds falsifies it.
struct ValidityResult {
  bool valid = true;
  std::optional<Counterexample> ce;
};
ValidityResult check_formula_valid(const Spec& spec, const FormulaPtr& f,
                                   const std::vector<TaskVar>& symbolic_consts,
                                   const DomainBounds& bounds,
                                   const CheckConfig& cfg = {});

// Naive reference implementation: enumerates every assignment (both state
// copies independently), runs the program concretely through exec_stmt, and
// evaluates goals with the tree-walking evaluator. No pruning; tractable only
// at tiny bounds. Serves as an in-library cross-check for the fast engine and
// as the fallback for constructs the fast engine does not compile.
TaskResult check_task_reference(const Spec& spec, const AnalysisTask& task,
                                const DomainBounds& bounds);

}  // namespace cise
