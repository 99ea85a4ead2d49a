#include "eval.hpp"

namespace cise {

namespace {

const StateValue* scoped_state(const EvalContext& ctx, const Expr& e) {
  size_t copy = static_cast<size_t>(e.state_copy);
  switch (e.scope) {
    case FieldScope::Current:
      if (ctx.copies && copy < ctx.copies->size()) return &(*ctx.copies)[copy];
      return ctx.current;
    case FieldScope::Old:
      if (ctx.old_copies && copy < ctx.old_copies->size())
        return &(*ctx.old_copies)[copy];
      return ctx.old_state;
    case FieldScope::Left:
      return ctx.left;
    case FieldScope::Right:
      return ctx.right;
  }
  return nullptr;
}

Value read_field(const EvalContext& ctx, const Expr& e) {
  const StateValue* sv = scoped_state(ctx, e);
  if (!sv || !ctx.state) throw EvalError("no state bound for field read: " + e.name);
  int idx = ctx.state->field_index(e.name);
  if (idx < 0) throw EvalError("unknown state field: " + e.name);
  return (*sv)[static_cast<size_t>(idx)];
}

}  // namespace

Value eval_expr(const ExprPtr& ep, const EvalContext& ctx) {
  const Expr& e = *ep;
  switch (e.kind) {
    case ExprKind::IntLit:
      return Value::integer(e.int_value);
    case ExprKind::Var: {
      const Value* v = ctx.env ? ctx.env->lookup(e.name) : nullptr;
      if (!v) throw EvalError("unbound variable: " + e.name);
      return *v;
    }
    case ExprKind::FieldRead:
      return read_field(ctx, e);
    case ExprKind::MkPair:
      return Value::pair(eval_expr(e.a, ctx), eval_expr(e.b, ctx));
    case ExprKind::Fst:
      return eval_expr(e.a, ctx).items[0];
    case ExprKind::Snd:
      return eval_expr(e.a, ctx).items[1];
    case ExprKind::EmptySet:
      return Value::empty_set();
    case ExprKind::SetAdd:
      return eval_expr(e.b, ctx).with_added(eval_expr(e.a, ctx));
    case ExprKind::SetRemove:
      return eval_expr(e.b, ctx).with_removed(eval_expr(e.a, ctx));
    case ExprKind::AddInt:
      return Value::integer(eval_expr(e.a, ctx).i + eval_expr(e.b, ctx).i);
    case ExprKind::SubInt:
      return Value::integer(eval_expr(e.a, ctx).i - eval_expr(e.b, ctx).i);
  }
  throw EvalError("malformed expression");
}

bool eval_formula(const FormulaPtr& fp, const EvalContext& ctx) {
  const Formula& f = *fp;
  switch (f.kind) {
    case FormulaKind::BoolLit:
      return f.bool_value;
    case FormulaKind::Cmp: {
      Value a = eval_expr(f.e1, ctx);
      Value b = eval_expr(f.e2, ctx);
      switch (f.cmp) {
        case CmpOp::Eq:
          return a == b;
        case CmpOp::Ne:
          return a != b;
        case CmpOp::Lt:
          return a.i < b.i;
        case CmpOp::Le:
          return a.i <= b.i;
        case CmpOp::Gt:
          return a.i > b.i;
        case CmpOp::Ge:
          return a.i >= b.i;
      }
      return false;
    }
    case FormulaKind::Mem:
      return eval_expr(f.e2, ctx).contains(eval_expr(f.e1, ctx));
    case FormulaKind::IsEmpty:
      return eval_expr(f.e1, ctx).is_empty_set();
    case FormulaKind::SetEq:
      return eval_expr(f.e1, ctx) == eval_expr(f.e2, ctx);
    case FormulaKind::BoolAtom:
      return eval_expr(f.e1, ctx).b;
    case FormulaKind::Not:
      return !eval_formula(f.f1, ctx);
    case FormulaKind::And:
      return eval_formula(f.f1, ctx) && eval_formula(f.f2, ctx);
    case FormulaKind::Or:
      return eval_formula(f.f1, ctx) || eval_formula(f.f2, ctx);
    case FormulaKind::Implies:
      return !eval_formula(f.f1, ctx) || eval_formula(f.f2, ctx);
    case FormulaKind::Iff:
      return eval_formula(f.f1, ctx) == eval_formula(f.f2, ctx);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      if (!f.binder_sort)
        throw EvalError("quantifier binder has no sort: " + f.binder);
      bool is_forall = f.kind == FormulaKind::Forall;
      Env inner = ctx.env ? *ctx.env : Env{};
      EvalContext sub = ctx;
      sub.env = &inner;
      for (const Value& v : enumerate_sort_values(*f.binder_sort, ctx.bounds)) {
        inner.bind(f.binder, v);
        bool r = eval_formula(f.f1, sub);
        inner.pop();
        if (is_forall && !r) return false;
        if (!is_forall && r) return true;
      }
      return is_forall;
    }
  }
  throw EvalError("malformed formula");
}

StateValue exec_stmt(const StmtPtr& sp, const StateValue& state, const EvalContext& ctx) {
  const Stmt& s = *sp;
  switch (s.kind) {
    case StmtKind::Skip:
      return state;
    case StmtKind::Assign: {
      if (!ctx.state) throw EvalError("no state declaration for assignment");
      int idx = ctx.state->field_index(s.field);
      if (idx < 0) throw EvalError("unknown state field: " + s.field);
      EvalContext sub = ctx;
      sub.current = &state;
      StateValue out = state;
      out[static_cast<size_t>(idx)] = eval_expr(s.value, sub);
      return out;
    }
    case StmtKind::Seq: {
      StateValue mid = exec_stmt(s.s1, state, ctx);
      return exec_stmt(s.s2, mid, ctx);
    }
  }
  throw EvalError("malformed statement");
}

long long sort_domain_size(const Sort& sort, const DomainBounds& bounds) {
  switch (sort.kind()) {
    case SortKind::Int:
      return bounds.size();
    case SortKind::Bool:
      return 2;
    case SortKind::Pair:
      return sort_domain_size(sort.first(), bounds) *
             sort_domain_size(sort.second(), bounds);
    case SortKind::Set: {
      long long n = sort_domain_size(sort.elem(), bounds);
      if (n >= 40) throw EvalError("set domain too large to enumerate");
      return 1LL << n;
    }
  }
  return 0;
}

std::vector<Value> enumerate_sort_values(const Sort& sort, const DomainBounds& bounds) {
  switch (sort.kind()) {
    case SortKind::Int: {
      std::vector<Value> out;
      for (long long v = bounds.lo; v <= bounds.hi; ++v)
        out.push_back(Value::integer(v));
      return out;
    }
    case SortKind::Bool:
      return {Value::boolean(false), Value::boolean(true)};
    case SortKind::Pair: {
      std::vector<Value> out;
      for (const Value& a : enumerate_sort_values(sort.first(), bounds))
        for (const Value& b : enumerate_sort_values(sort.second(), bounds))
          out.push_back(Value::pair(a, b));
      return out;
    }
    case SortKind::Set: {
      std::vector<Value> elems = enumerate_sort_values(sort.elem(), bounds);
      size_t n = elems.size();
      if (n >= 22) throw EvalError("set domain too large to enumerate");
      std::vector<Value> out;
      out.reserve(1u << n);
      for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
        std::vector<Value> members;
        for (size_t i = 0; i < n; ++i)
          if (mask & (1ull << i)) members.push_back(elems[i]);
        out.push_back(Value::set(std::move(members)));
      }
      return out;
    }
  }
  return {};
}

}  // namespace cise
