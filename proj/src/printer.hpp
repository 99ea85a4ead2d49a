#pragma once

#include <string>

#include "ast.hpp"

namespace cise {

// Controls how state-field reads are rendered.
struct PrintContext {
  std::string state_param = "state";  // Current/Old reads
  std::string left_param = "s1";      // Left reads
  std::string right_param = "s2";     // Right reads
  bool bare_fields = false;           // invariant scope: no state prefix
  bool annotate_binders = true;       // annotate non-int quantifier sorts
};

std::string print_sort(const Sort& s);
std::string print_expr(const ExprPtr& e, const PrintContext& ctx = {});
std::string print_formula(const FormulaPtr& f, const PrintContext& ctx = {});
std::string print_stmt(const StmtPtr& s, const PrintContext& ctx = {});

// Full spec in concrete syntax; reparses to a structurally equal Spec.
std::string print_spec(const Spec& spec);

}  // namespace cise
