#pragma once

#include <optional>

#include "ast.hpp"
#include "tokens.hpp"

namespace cise {

// A generated verification job. Formulas range over the task's symbolic
// variables plus state-field reads tagged with a state copy (Expr::state_copy)
// and a scope (Current = at the goal's evaluation point, Old = at the entry
// of the call named by ProofGoal::old_at).

enum class TaskKind { Safety, PairCommutativity, SelfStability };

struct TaskVar {
  std::string name;
  Sort sort;
};

struct TaskCall {
  std::string op;
  std::vector<std::string> args;  // instance variable names, one per parameter
  int state;                      // which state copy the call mutates
};

enum class GoalRole {
  SafetyEnsures,
  SafetyInvariant,
  PairPre,        // stability of one direction of a pair
  FinalEquality,  // commutativity
  Conformance,    // an ensures clause mid-sequence; blames the op's safety
  SelfPre,
};

struct ProofGoal {
  std::string label;
  GoalRole role;
  FormulaPtr formula;
  int eval_after = 0;       // number of completed calls at evaluation time
  int old_at = -1;          // call whose entry snapshot binds Old reads
  std::string subject_op;   // op whose precondition/contract this goal checks
};

struct AnalysisTask {
  TaskKind kind;
  std::string name;  // e.g. enroll_remCourse_commutativity
  std::string op_f, op_g;
  std::vector<TaskVar> vars;
  int state_copies = 1;
  bool state_eq_pointwise = false;  // both copies may be enumerated as one
  FormulaPtr assumption;
  std::vector<TaskCall> program;
  std::vector<ProofGoal> goals;
};

// Result of task generation: a token system may suppress the task entirely.
struct GenResult {
  std::optional<AnalysisTask> task;
  bool skipped = false;
};

AnalysisTask gen_safety(const Spec& spec, const OpDecl& op);
GenResult gen_pair(const Spec& spec, const OpDecl& f, const OpDecl& g,
                   const TokenSystem* tokens);
GenResult gen_self(const Spec& spec, const OpDecl& f, const TokenSystem* tokens);

// Point-wise field equality: `=` on scalar fields, `==` on set fields, over
// Left/Right-scoped reads. Used when the spec declares no [@state_eq].
FormulaPtr default_state_eq(const Spec& spec);

// The state-equality schema in force (user-declared or generated), and
// whether it is a point-wise comparison covering every field — in which case
// assuming it is the same as sharing one state value between both copies.
FormulaPtr state_eq_schema(const Spec& spec);
bool state_eq_is_pointwise(const Spec& spec);

// Schema instantiated over two state copies at the evaluation point.
FormulaPtr instantiate_state_eq(const Spec& spec, int left_copy, int right_copy);

// Clause of `op` with parameters replaced by instance variables and field
// reads tagged with `copy`.
FormulaPtr instantiate_clause(const FormulaPtr& clause, const OpDecl& op,
                              const std::vector<std::string>& arg_names, int copy);

// The full CISE battery in deterministic order: safety per operation,
// commutativity+stability per unordered pair, self-stability per operation
// (operations ordered by name). Token-suppressed tasks land in the skip lists.
struct GeneratedTasks {
  std::vector<AnalysisTask> tasks;
  std::vector<std::pair<std::string, std::string>> skipped_pairs;
  std::vector<std::string> skipped_self;
};
GeneratedTasks generate_all_tasks(const Spec& spec, const TokenSystem* tokens);

}  // namespace cise
