#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "ast.hpp"

namespace cise {

// Fresh-name pool: names never collide with anything recorded as used.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> used = {}) : used_(std::move(used)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  bool is_used(const std::string& name) const { return used_.count(name) > 0; }

  // Returns prefix, prefix0, prefix1, ... — the first unused one.
  std::string fresh(const std::string& prefix);
  // Returns prefix<n> with increasing n (v0, v1, ...), skipping used names.
  std::string fresh_numbered(const std::string& prefix);

 private:
  std::set<std::string> used_;
  std::map<std::string, int> counters_;
};

// Simultaneous substitution of variables and state-field reads.
struct Substitution {
  std::map<std::string, ExprPtr> vars;
  // key: (field name, scope, state copy)
  std::map<std::tuple<std::string, int, int>, ExprPtr> fields;

  void map_var(const std::string& name, ExprPtr e) { vars[name] = std::move(e); }
  void map_field(const std::string& field, FieldScope scope, int copy, ExprPtr e) {
    fields[{field, static_cast<int>(scope), copy}] = std::move(e);
  }
};

ExprPtr substitute(const ExprPtr& e, const Substitution& s);
// Capture-avoiding; binders that would capture a replacement's free variable
// are renamed from `fresh` (required only when capture is possible).
FormulaPtr substitute(const FormulaPtr& f, const Substitution& s,
                      FreshNames* fresh = nullptr);

ExprPtr clone_expr(const ExprPtr& e);
FormulaPtr clone_formula(const FormulaPtr& f);

// Deep-clones and lets `edit` rewrite every FieldRead node of the clone.
FormulaPtr retag_fields(const FormulaPtr& f, const std::function<void(Expr&)>& edit);
ExprPtr retag_fields(const ExprPtr& e, const std::function<void(Expr&)>& edit);

std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> free_vars(const ExprPtr& e);

struct FieldUse {
  std::string field;
  FieldScope scope;
  int copy;
  bool operator<(const FieldUse& o) const {
    return std::tie(field, scope, copy) < std::tie(o.field, o.scope, o.copy);
  }
};
std::set<FieldUse> fields_read(const FormulaPtr& f);
std::set<FieldUse> fields_read(const ExprPtr& e);

// Every identifier appearing anywhere in the spec (fields, operations,
// parameters, binders, predicate names); the fresh-variable hygiene pool.
std::set<std::string> spec_identifiers(const Spec& spec);

// Structural equality; with `alpha`, bound variables are compared by binding
// position instead of name.
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b, bool alpha);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
inline bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_equal(a, b, true);
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b);
bool spec_equal(const Spec& a, const Spec& b);

}  // namespace cise
