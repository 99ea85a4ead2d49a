#include "subst.hpp"

#include <cassert>

namespace cise {

std::string FreshNames::fresh(const std::string& prefix) {
  if (!is_used(prefix)) {
    used_.insert(prefix);
    return prefix;
  }
  return fresh_numbered(prefix);
}

std::string FreshNames::fresh_numbered(const std::string& prefix) {
  int& n = counters_[prefix];
  for (;;) {
    std::string candidate = prefix + std::to_string(n++);
    if (!is_used(candidate)) {
      used_.insert(candidate);
      return candidate;
    }
  }
}

namespace {

ExprPtr shallow_copy(const Expr& e) { return std::make_shared<Expr>(e); }

ExprPtr subst_expr(const ExprPtr& ep, const Substitution& s) {
  const Expr& e = *ep;
  switch (e.kind) {
    case ExprKind::Var: {
      auto it = s.vars.find(e.name);
      if (it != s.vars.end()) return it->second;
      return shallow_copy(e);
    }
    case ExprKind::FieldRead: {
      auto it = s.fields.find({e.name, static_cast<int>(e.scope), e.state_copy});
      if (it != s.fields.end()) return it->second;
      return shallow_copy(e);
    }
    case ExprKind::IntLit:
    case ExprKind::EmptySet:
      return shallow_copy(e);
    default: {
      ExprPtr out = shallow_copy(e);
      if (e.a) out->a = subst_expr(e.a, s);
      if (e.b) out->b = subst_expr(e.b, s);
      return out;
    }
  }
}

bool subst_mentions(const Substitution& s, const std::string& name) {
  for (const auto& [k, v] : s.vars)
    if (free_vars(v).count(name)) return true;
  for (const auto& [k, v] : s.fields)
    if (free_vars(v).count(name)) return true;
  return false;
}

FormulaPtr subst_formula(const FormulaPtr& fp, const Substitution& s,
                         FreshNames* fresh) {
  const Formula& f = *fp;
  auto out = std::make_shared<Formula>(f);
  switch (f.kind) {
    case FormulaKind::BoolLit:
      return out;
    case FormulaKind::Cmp:
    case FormulaKind::Mem:
    case FormulaKind::SetEq:
      out->e1 = subst_expr(f.e1, s);
      out->e2 = subst_expr(f.e2, s);
      return out;
    case FormulaKind::IsEmpty:
    case FormulaKind::BoolAtom:
      out->e1 = subst_expr(f.e1, s);
      return out;
    case FormulaKind::Not:
      out->f1 = subst_formula(f.f1, s, fresh);
      return out;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      out->f1 = subst_formula(f.f1, s, fresh);
      out->f2 = subst_formula(f.f2, s, fresh);
      return out;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      Substitution inner = s;
      inner.vars.erase(f.binder);
      if (subst_mentions(inner, f.binder)) {
        assert(fresh && "binder capture requires a fresh-name pool");
        std::string renamed = fresh->fresh_numbered(f.binder + "_");
        Substitution rename;
        rename.map_var(f.binder, Expr::var(renamed));
        out->binder = renamed;
        out->f1 = subst_formula(subst_formula(f.f1, rename, fresh), inner, fresh);
        return out;
      }
      out->f1 = subst_formula(f.f1, inner, fresh);
      return out;
    }
  }
  return out;
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const Substitution& s) { return subst_expr(e, s); }

FormulaPtr substitute(const FormulaPtr& f, const Substitution& s, FreshNames* fresh) {
  return subst_formula(f, s, fresh);
}

ExprPtr clone_expr(const ExprPtr& ep) {
  auto out = std::make_shared<Expr>(*ep);
  if (ep->a) out->a = clone_expr(ep->a);
  if (ep->b) out->b = clone_expr(ep->b);
  return out;
}

FormulaPtr clone_formula(const FormulaPtr& fp) {
  auto out = std::make_shared<Formula>(*fp);
  if (fp->e1) out->e1 = clone_expr(fp->e1);
  if (fp->e2) out->e2 = clone_expr(fp->e2);
  if (fp->f1) out->f1 = clone_formula(fp->f1);
  if (fp->f2) out->f2 = clone_formula(fp->f2);
  return out;
}

ExprPtr retag_fields(const ExprPtr& e, const std::function<void(Expr&)>& edit) {
  ExprPtr out = std::make_shared<Expr>(*e);
  if (e->a) out->a = retag_fields(e->a, edit);
  if (e->b) out->b = retag_fields(e->b, edit);
  if (out->kind == ExprKind::FieldRead) edit(*out);
  return out;
}

FormulaPtr retag_fields(const FormulaPtr& f, const std::function<void(Expr&)>& edit) {
  auto out = std::make_shared<Formula>(*f);
  if (f->e1) out->e1 = retag_fields(f->e1, edit);
  if (f->e2) out->e2 = retag_fields(f->e2, edit);
  if (f->f1) out->f1 = retag_fields(f->f1, edit);
  if (f->f2) out->f2 = retag_fields(f->f2, edit);
  return out;
}

namespace {

void collect_free_vars(const ExprPtr& e, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  if (!e) return;
  if (e->kind == ExprKind::Var && !bound.count(e->name)) out.insert(e->name);
  collect_free_vars(e->a, bound, out);
  collect_free_vars(e->b, bound, out);
}

void collect_free_vars(const FormulaPtr& f, std::set<std::string>& bound,
                       std::set<std::string>& out) {
  if (!f) return;
  collect_free_vars(f->e1, bound, out);
  collect_free_vars(f->e2, bound, out);
  if (f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists) {
    bool inserted = bound.insert(f->binder).second;
    collect_free_vars(f->f1, bound, out);
    if (inserted) bound.erase(f->binder);
    return;
  }
  collect_free_vars(f->f1, bound, out);
  collect_free_vars(f->f2, bound, out);
}

void collect_fields(const ExprPtr& e, std::set<FieldUse>& out) {
  if (!e) return;
  if (e->kind == ExprKind::FieldRead) out.insert({e->name, e->scope, e->state_copy});
  collect_fields(e->a, out);
  collect_fields(e->b, out);
}

void collect_fields(const FormulaPtr& f, std::set<FieldUse>& out) {
  if (!f) return;
  collect_fields(f->e1, out);
  collect_fields(f->e2, out);
  collect_fields(f->f1, out);
  collect_fields(f->f2, out);
}

void collect_binders(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists)
    out.insert(f->binder);
  collect_binders(f->f1, out);
  collect_binders(f->f2, out);
}

}  // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  collect_free_vars(e, bound, out);
  return out;
}

std::set<FieldUse> fields_read(const FormulaPtr& f) {
  std::set<FieldUse> out;
  collect_fields(f, out);
  return out;
}

std::set<FieldUse> fields_read(const ExprPtr& e) {
  std::set<FieldUse> out;
  collect_fields(e, out);
  return out;
}

std::set<std::string> spec_identifiers(const Spec& spec) {
  std::set<std::string> out;
  out.insert(spec.state.type_name);
  for (const auto& f : spec.state.fields) out.insert(f.name);
  for (const auto& rw : spec.state.rw_fields) out.insert(rw.name);
  for (const auto& op : spec.ops) {
    out.insert(op.name);
    out.insert(op.state_param);
    for (const auto& p : op.params) out.insert(p.name);
    for (const auto& r : op.requires_clauses) collect_binders(r, out);
    for (const auto& q : op.ensures_clauses) collect_binders(q, out);
  }
  collect_binders(spec.state.invariant, out);
  if (spec.state_eq) {
    out.insert(spec.state_eq->pred_name);
    out.insert(spec.state_eq->left_param);
    out.insert(spec.state_eq->right_param);
    collect_binders(spec.state_eq->body, out);
  }
  return out;
}

namespace {

struct AlphaCtx {
  std::vector<std::pair<std::string, std::string>> pairs;  // (a-binder, b-binder)

  bool vars_match(const std::string& a, const std::string& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;
  }
};

bool sorts_match(const std::optional<Sort>& a, const std::optional<Sort>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b, const AlphaCtx& ctx) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::IntLit:
      return a->int_value == b->int_value;
    case ExprKind::Var:
      return ctx.vars_match(a->name, b->name);
    case ExprKind::FieldRead:
      return a->name == b->name && a->scope == b->scope &&
             a->state_copy == b->state_copy;
    case ExprKind::EmptySet:
      return true;
    default:
      return expr_eq(a->a, b->a, ctx) && expr_eq(a->b, b->b, ctx);
  }
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b, AlphaCtx& ctx, bool alpha) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::BoolLit:
      return a->bool_value == b->bool_value;
    case FormulaKind::Cmp:
      if (a->cmp != b->cmp) return false;
      [[fallthrough]];
    case FormulaKind::Mem:
    case FormulaKind::SetEq:
      return expr_eq(a->e1, b->e1, ctx) && expr_eq(a->e2, b->e2, ctx);
    case FormulaKind::IsEmpty:
    case FormulaKind::BoolAtom:
      return expr_eq(a->e1, b->e1, ctx);
    case FormulaKind::Not:
      return formula_eq(a->f1, b->f1, ctx, alpha);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      return formula_eq(a->f1, b->f1, ctx, alpha) && formula_eq(a->f2, b->f2, ctx, alpha);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      if (!alpha && a->binder != b->binder) return false;
      if (!sorts_match(a->binder_sort, b->binder_sort)) return false;
      ctx.pairs.emplace_back(a->binder, b->binder);
      bool r = formula_eq(a->f1, b->f1, ctx, alpha);
      ctx.pairs.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  AlphaCtx ctx;
  return expr_eq(a, b, ctx);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b, bool alpha) {
  AlphaCtx ctx;
  return formula_eq(a, b, ctx, alpha);
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StmtKind::Skip:
      return true;
    case StmtKind::Assign:
      return a->field == b->field && expr_equal(a->value, b->value);
    case StmtKind::Seq:
      return stmt_equal(a->s1, b->s1) && stmt_equal(a->s2, b->s2);
  }
  return false;
}

bool spec_equal(const Spec& a, const Spec& b) {
  if (a.state.type_name != b.state.type_name) return false;
  if (a.state.fields.size() != b.state.fields.size()) return false;
  for (size_t i = 0; i < a.state.fields.size(); ++i) {
    if (a.state.fields[i].name != b.state.fields[i].name) return false;
    if (!(a.state.fields[i].sort == b.state.fields[i].sort)) return false;
  }
  if (!formula_equal(a.state.invariant, b.state.invariant, false)) return false;
  if (a.ops.size() != b.ops.size()) return false;
  for (size_t i = 0; i < a.ops.size(); ++i) {
    const OpDecl& x = a.ops[i];
    const OpDecl& y = b.ops[i];
    if (x.name != y.name || x.state_param != y.state_param) return false;
    if (x.params.size() != y.params.size()) return false;
    for (size_t j = 0; j < x.params.size(); ++j)
      if (x.params[j].name != y.params[j].name || !(x.params[j].sort == y.params[j].sort))
        return false;
    if (x.requires_clauses.size() != y.requires_clauses.size()) return false;
    for (size_t j = 0; j < x.requires_clauses.size(); ++j)
      if (!formula_equal(x.requires_clauses[j], y.requires_clauses[j], false))
        return false;
    if (x.ensures_clauses.size() != y.ensures_clauses.size()) return false;
    for (size_t j = 0; j < x.ensures_clauses.size(); ++j)
      if (!formula_equal(x.ensures_clauses[j], y.ensures_clauses[j], false)) return false;
    if (!stmt_equal(x.body, y.body)) return false;
  }
  if (a.state_eq.has_value() != b.state_eq.has_value()) return false;
  if (a.state_eq) {
    if (a.state_eq->pred_name != b.state_eq->pred_name) return false;
    if (!formula_equal(a.state_eq->body, b.state_eq->body, false)) return false;
  }
  return true;
}

}  // namespace cise
