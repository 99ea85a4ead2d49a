#include "typecheck.hpp"

#include <set>

namespace cise {

bool set_elem_sort_ok(const Sort& elem) {
  if (elem.is_int()) return true;
  return elem.is_pair() && elem.first().is_int() && elem.second().is_int();
}

namespace {

struct Binder {
  std::string name;
  Formula* owner;  // binder_sort written through here
};

class Checker {
 public:
  Checker(TypeScope& scope, std::vector<Diagnostic>& diags)
      : scope_(scope), diags_(diags) {}

  void formula(const FormulaPtr& f) { check_formula_node(f); }

  void expr_expecting(const ExprPtr& e, const Sort& expected) {
    Res r = infer(e, &expected);
    if (r.state == Res::Unresolved)
      error(e->span, "cannot infer the sort of this expression");
  }

 private:
  struct Res {
    enum State { Ok, Unresolved, Error } state = Error;
    Sort sort;

    static Res ok(Sort s) { return {Ok, std::move(s)}; }
    static Res unresolved() { return {Unresolved, {}}; }
    static Res error() { return {Error, {}}; }
  };

  void error(const SourceSpan& sp, const std::string& msg) {
    diags_.push_back({sp, msg});
  }

  bool match(const SourceSpan& sp, const Sort& got, const Sort& expected) {
    if (got == expected) return true;
    error(sp, "sort mismatch: expected " + expected.str() + ", got " + got.str());
    return false;
  }

  Res finish(const ExprPtr& e, Sort s, const Sort* expected) {
    if (expected && !match(e->span, s, *expected)) return Res::error();
    e->sort = s;
    return Res::ok(std::move(s));
  }

  Res infer(const ExprPtr& e, const Sort* expected) {
    switch (e->kind) {
      case ExprKind::IntLit:
        return finish(e, Sort::integer(), expected);

      case ExprKind::Var: {
        // Innermost binder shadows parameters.
        for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
          if (it->name != e->name) continue;
          Formula* q = it->owner;
          if (q->binder_sort) return finish(e, *q->binder_sort, expected);
          if (!expected) return Res::unresolved();
          q->binder_sort = *expected;
          return finish(e, *expected, expected);
        }
        for (const auto& v : scope_.vars)
          if (v.name == e->name) return finish(e, v.sort, expected);
        error(e->span, "unknown identifier: " + e->name);
        return Res::error();
      }

      case ExprKind::FieldRead: {
        if (!scope_.state) {
          error(e->span, "state field read outside a state scope: " + e->name);
          return Res::error();
        }
        bool scope_ok = (e->scope == FieldScope::Current && scope_.allow_current) ||
                        (e->scope == FieldScope::Old && scope_.allow_old) ||
                        ((e->scope == FieldScope::Left || e->scope == FieldScope::Right) &&
                         scope_.allow_left_right);
        if (!scope_ok) {
          error(e->span, e->scope == FieldScope::Old
                             ? "`old` is only allowed in ensures clauses"
                             : "state read not allowed here: " + e->name);
          return Res::error();
        }
        int idx = scope_.state->field_index(e->name);
        if (idx < 0) {
          error(e->span, "unknown state field: " + e->name);
          return Res::error();
        }
        return finish(e, scope_.state->fields[static_cast<size_t>(idx)].sort, expected);
      }

      case ExprKind::MkPair: {
        const Sort* ea = nullptr;
        const Sort* eb = nullptr;
        Sort sa, sb;
        if (expected) {
          if (!expected->is_pair()) {
            error(e->span, "sort mismatch: expected " + expected->str() + ", got a pair");
            return Res::error();
          }
          sa = expected->first();
          sb = expected->second();
          ea = &sa;
          eb = &sb;
        }
        Res ra = infer(e->a, ea);
        Res rb = infer(e->b, eb);
        if (ra.state == Res::Error || rb.state == Res::Error) return Res::error();
        if (ra.state == Res::Unresolved || rb.state == Res::Unresolved)
          return Res::unresolved();
        return finish(e, Sort::pair(ra.sort, rb.sort), nullptr);
      }

      case ExprKind::Fst:
      case ExprKind::Snd: {
        Res r = infer(e->a, nullptr);
        if (r.state == Res::Unresolved) {
          error(e->a->span, "cannot infer the sort of a projection argument");
          return Res::error();
        }
        if (r.state == Res::Error) return Res::error();
        if (!r.sort.is_pair()) {
          error(e->span, "projection applied to a non-pair of sort " + r.sort.str());
          return Res::error();
        }
        Sort s = e->kind == ExprKind::Fst ? r.sort.first() : r.sort.second();
        return finish(e, std::move(s), expected);
      }

      case ExprKind::EmptySet: {
        if (e->elem_sort) {
          if (!set_elem_sort_ok(*e->elem_sort)) {
            error(e->span, "unsupported set element sort " + e->elem_sort->str());
            return Res::error();
          }
          return finish(e, Sort::set(*e->elem_sort), expected);
        }
        if (!expected) return Res::unresolved();
        if (!expected->is_set()) {
          error(e->span, "sort mismatch: expected " + expected->str() + ", got a set");
          return Res::error();
        }
        e->elem_sort = expected->elem();
        return finish(e, *expected, nullptr);
      }

      case ExprKind::SetAdd:
      case ExprKind::SetRemove: {
        Res rs = infer(e->b, nullptr);
        if (rs.state == Res::Ok) {
          if (!rs.sort.is_set()) {
            error(e->b->span, "expected a set, got " + rs.sort.str());
            return Res::error();
          }
          Sort elem = rs.sort.elem();
          if (infer(e->a, &elem).state != Res::Ok) return Res::error();
          return finish(e, rs.sort, expected);
        }
        if (rs.state == Res::Error) return Res::error();
        // Set side unresolved; try to pin it down from the element.
        Res re = infer(e->a, nullptr);
        if (re.state == Res::Ok) {
          if (!set_elem_sort_ok(re.sort)) {
            error(e->a->span, "unsupported set element sort " + re.sort.str());
            return Res::error();
          }
          Sort want = Sort::set(re.sort);
          if (infer(e->b, &want).state != Res::Ok) return Res::error();
          return finish(e, want, expected);
        }
        if (re.state == Res::Error) return Res::error();
        if (expected) {
          if (!expected->is_set()) {
            error(e->span, "sort mismatch: expected " + expected->str() + ", got a set");
            return Res::error();
          }
          Sort elem = expected->elem();
          if (infer(e->a, &elem).state != Res::Ok) return Res::error();
          if (infer(e->b, expected).state != Res::Ok) return Res::error();
          return finish(e, *expected, nullptr);
        }
        return Res::unresolved();
      }

      case ExprKind::AddInt:
      case ExprKind::SubInt: {
        Sort si = Sort::integer();
        bool ok = infer(e->a, &si).state == Res::Ok;
        ok = infer(e->b, &si).state == Res::Ok && ok;
        if (!ok) return Res::error();
        return finish(e, Sort::integer(), expected);
      }
    }
    return Res::error();
  }

  // Infers two sides that must agree, retrying with the resolved side first.
  bool infer_same_sort(const FormulaPtr& f, Sort* out) {
    Res r1 = infer(f->e1, nullptr);
    if (r1.state == Res::Ok) {
      if (infer(f->e2, &r1.sort).state != Res::Ok) return false;
      *out = r1.sort;
      return true;
    }
    if (r1.state == Res::Error) return false;
    Res r2 = infer(f->e2, nullptr);
    if (r2.state == Res::Ok) {
      if (infer(f->e1, &r2.sort).state != Res::Ok) return false;
      *out = r2.sort;
      return true;
    }
    error(f->span, "cannot infer the operand sorts of this comparison");
    return false;
  }

  void check_formula_node(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::BoolLit:
        return;

      case FormulaKind::Cmp: {
        Sort s;
        if (!infer_same_sort(f, &s)) return;
        bool order = f->cmp == CmpOp::Lt || f->cmp == CmpOp::Le ||
                     f->cmp == CmpOp::Gt || f->cmp == CmpOp::Ge;
        if (order && !s.is_int())
          error(f->span, "ordering comparison requires int operands, got " + s.str());
        if ((f->cmp == CmpOp::Ne) && s.is_set())
          error(f->span, "use a negated equality for set disequality");
        return;
      }

      case FormulaKind::Mem: {
        Res rs = infer(f->e2, nullptr);
        if (rs.state == Res::Ok) {
          if (!rs.sort.is_set()) {
            error(f->e2->span, "mem expects a set, got " + rs.sort.str());
            return;
          }
          Sort elem = rs.sort.elem();
          infer(f->e1, &elem);
          return;
        }
        if (rs.state == Res::Error) return;
        Res re = infer(f->e1, nullptr);
        if (re.state != Res::Ok) {
          error(f->span, "cannot infer the set sort of this membership");
          return;
        }
        Sort want = Sort::set(re.sort);
        infer(f->e2, &want);
        return;
      }

      case FormulaKind::IsEmpty: {
        Res r = infer(f->e1, nullptr);
        if (r.state == Res::Unresolved)
          error(f->span, "cannot infer the set sort of is_empty");
        else if (r.state == Res::Ok && !r.sort.is_set())
          error(f->e1->span, "is_empty expects a set, got " + r.sort.str());
        return;
      }

      case FormulaKind::SetEq: {
        Sort s;
        if (!infer_same_sort(f, &s)) return;
        if (!s.is_set()) error(f->span, "== requires set operands, got " + s.str());
        return;
      }

      case FormulaKind::BoolAtom: {
        Sort sb = Sort::boolean();
        infer(f->e1, &sb);
        return;
      }

      case FormulaKind::Not:
        check_formula_node(f->f1);
        return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
      case FormulaKind::Iff:
        check_formula_node(f->f1);
        check_formula_node(f->f2);
        return;

      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        if (f->binder_sort && f->binder_sort->is_set() &&
            !set_elem_sort_ok(f->binder_sort->elem()))
          error(f->span, "unsupported set element sort in quantifier");
        binders_.push_back({f->binder, f.get()});
        check_formula_node(f->f1);
        binders_.pop_back();
        if (!f->binder_sort) f->binder_sort = Sort::integer();  // unconstrained binder
        return;
      }
    }
  }

  TypeScope& scope_;
  std::vector<Diagnostic>& diags_;
  std::vector<Binder> binders_;
};

void check_stmt(const StmtPtr& s, TypeScope& scope, std::vector<Diagnostic>& diags) {
  switch (s->kind) {
    case StmtKind::Skip:
      return;
    case StmtKind::Assign: {
      int idx = scope.state->field_index(s->field);
      if (idx < 0) {
        diags.push_back({s->span, "assignment to unknown state field: " + s->field});
        return;
      }
      Checker c(scope, diags);
      c.expr_expecting(s->value, scope.state->fields[static_cast<size_t>(idx)].sort);
      return;
    }
    case StmtKind::Seq:
      check_stmt(s->s1, scope, diags);
      check_stmt(s->s2, scope, diags);
      return;
  }
}

}  // namespace

void check_formula(const FormulaPtr& f, TypeScope& scope, std::vector<Diagnostic>& diags) {
  Checker c(scope, diags);
  c.formula(f);
}

void check_expr_expecting(const ExprPtr& e, const Sort& expected, TypeScope& scope,
                          std::vector<Diagnostic>& diags) {
  Checker c(scope, diags);
  c.expr_expecting(e, expected);
}

std::vector<Diagnostic> typecheck(Spec& spec) {
  std::vector<Diagnostic> diags;

  std::set<std::string> field_names;
  for (const auto& fd : spec.state.fields) {
    if (!field_names.insert(fd.name).second)
      diags.push_back({fd.span, "duplicate state field: " + fd.name});
    if (fd.sort.is_set() && !set_elem_sort_ok(fd.sort.elem()))
      diags.push_back({fd.span, "unsupported set element sort " + fd.sort.elem().str()});
  }
  for (const auto& rw : spec.state.rw_fields) field_names.insert(rw.name);

  {
    TypeScope inv_scope;
    inv_scope.state = &spec.state;
    check_formula(spec.state.invariant, inv_scope, diags);
  }

  std::set<std::string> op_names;
  for (auto& op : spec.ops) {
    if (!op_names.insert(op.name).second)
      diags.push_back({op.span, "duplicate operation name: " + op.name});

    std::set<std::string> param_names;
    for (const auto& p : op.params) {
      if (!param_names.insert(p.name).second)
        diags.push_back({p.span, "duplicate parameter name: " + p.name});
      if (field_names.count(p.name))
        diags.push_back({p.span, "parameter shadows a state field: " + p.name});
    }

    TypeScope op_scope;
    op_scope.state = &spec.state;
    op_scope.vars = op.params;

    for (auto& r : op.requires_clauses) check_formula(r, op_scope, diags);

    TypeScope ens_scope = op_scope;
    ens_scope.allow_old = true;
    for (auto& q : op.ensures_clauses) check_formula(q, ens_scope, diags);

    check_stmt(op.body, op_scope, diags);
  }

  if (spec.state_eq) {
    TypeScope eq_scope;
    eq_scope.state = &spec.state;
    eq_scope.allow_current = false;
    eq_scope.allow_left_right = true;
    check_formula(spec.state_eq->body, eq_scope, diags);
  }

  return diags;
}

}  // namespace cise
