#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace cise {

struct Diagnostic {
  SourceSpan span;
  std::string message;

  std::string str() const { return span.str() + ": " + message; }
};

// Sort-checks the whole spec, filling in Expr::sort and inferring
// unannotated quantifier binder sorts from their first constraining use.
// Returns the empty list iff the spec is well-sorted.
std::vector<Diagnostic> typecheck(Spec& spec);

// Scope against which a single formula is checked.
struct TypeScope {
  const StateDecl* state = nullptr;
  std::vector<ParamDecl> vars;  // parameters / symbolic constants
  bool allow_current = true;
  bool allow_old = false;
  bool allow_left_right = false;
};

void check_formula(const FormulaPtr& f, TypeScope& scope, std::vector<Diagnostic>& diags);
void check_expr_expecting(const ExprPtr& e, const Sort& expected, TypeScope& scope,
                          std::vector<Diagnostic>& diags);

// Set elements are restricted to int and (int, int).
bool set_elem_sort_ok(const Sort& elem);

}  // namespace cise
