#pragma once

#include "ast.hpp"
#include "typecheck.hpp"

namespace cise {

struct SpResult {
  FormulaPtr formula;
  std::vector<std::string> fresh_vars;  // introduced existentials, in order
};

// Strongest postcondition of `body` under precondition `pre`, by the Floyd
// assignment rule over flattened state fields:
//   sp(P, skip)          = P
//   sp(P, x <- e)        = exists v. x = e[x -> v] && P[x -> v]
//   sp(P, s1; s2)        = sp(sp(P, s1), s2)
// Fresh variables are v0, v1, ... and never collide with spec identifiers.
SpResult sp(const Spec& spec, const FormulaPtr& pre, const StmtPtr& body);

// Equivalence-preserving cleanup: drops `true` conjuncts, reassociates nested
// conjunctions, and removes existential binders whose variable is unused.
FormulaPtr simplify(const FormulaPtr& f);

// Front-end used by the `sp` command: conjoins the operation's requires
// clauses, runs sp over its body, and simplifies. The operation must not
// declare ensures clauses unless `force` is set.
struct SpForOpResult {
  FormulaPtr formula;  // null on error
  std::vector<std::string> fresh_vars;
  std::string error;
};
SpForOpResult sp_for_op(const Spec& spec, const std::string& op_name, bool force);

// Concrete-syntax rendering of an SP formula in the operation's scope.
// Prefers the annotation-free surface form when it reparses to the same
// formula; falls back to annotated binders otherwise.
std::string sp_print(const Spec& spec, const std::string& op_name, const FormulaPtr& f);

}  // namespace cise
