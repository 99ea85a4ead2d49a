#pragma once

#include <stdexcept>

#include "ast.hpp"
#include "value.hpp"

namespace cise {

// Finite domain for bounded evaluation. All quantified integers range over
// [lo, hi]; set domains are the subsets of the bounded element domain.
struct DomainBounds {
  long long lo = 0;
  long long hi = 3;
  int cap = 4;  // maximum allowed interval size

  long long size() const { return hi - lo + 1; }
  bool valid() const { return lo <= hi && size() <= cap; }
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolution context for formula/expression evaluation. `current` backs
// FieldScope::Current reads, `old_state` FieldScope::Old, and `left`/`right`
// the two sides of a state-equality predicate. Any of them may be null when
// the corresponding scope cannot occur.
struct EvalContext {
  const StateDecl* state = nullptr;
  const StateValue* current = nullptr;
  const StateValue* old_state = nullptr;
  const StateValue* left = nullptr;
  const StateValue* right = nullptr;
  // Analysis-task formulas tag field reads with a state copy; when these are
  // set, Current/Old reads resolve through them (indexed by Expr::state_copy)
  // and take precedence over `current`/`old_state`.
  const std::vector<StateValue>* copies = nullptr;
  const std::vector<StateValue>* old_copies = nullptr;
  const Env* env = nullptr;
  DomainBounds bounds;
};

Value eval_expr(const ExprPtr& e, const EvalContext& ctx);
bool eval_formula(const FormulaPtr& f, const EvalContext& ctx);

// Executes a statement over a state value; the input is never mutated.
StateValue exec_stmt(const StmtPtr& s, const StateValue& state, const EvalContext& ctx);

// All values of a sort within bounds, in canonical ascending order. Sets are
// ordered by characteristic bitmask over the ordered element domain, so the
// empty set comes first. Throws EvalError when the domain is infeasibly large.
std::vector<Value> enumerate_sort_values(const Sort& sort, const DomainBounds& bounds);

// Number of values enumerate_sort_values would return, without materializing.
long long sort_domain_size(const Sort& sort, const DomainBounds& bounds);

}  // namespace cise
