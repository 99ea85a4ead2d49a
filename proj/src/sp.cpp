#include "sp.hpp"

#include "parser.hpp"
#include "printer.hpp"
#include "subst.hpp"

namespace cise {

namespace {

FormulaPtr sp_step(const Spec& spec, FormulaPtr p, const StmtPtr& s, FreshNames& fresh,
                   std::vector<std::string>& introduced) {
  switch (s->kind) {
    case StmtKind::Skip:
      return p;

    case StmtKind::Assign: {
      int idx = spec.state.field_index(s->field);
      Sort field_sort = spec.state.fields[static_cast<size_t>(idx)].sort;
      std::string v = fresh.fresh_numbered("v");
      introduced.push_back(v);

      Substitution to_v;
      to_v.map_field(s->field, FieldScope::Current, 0, Expr::var(v));

      ExprPtr lhs = Expr::field(s->field, FieldScope::Current);
      lhs->sort = field_sort;
      ExprPtr rhs = substitute(s->value, to_v);
      FormulaPtr eq = Formula::compare(CmpOp::Eq, lhs, rhs);
      FormulaPtr shifted = substitute(p, to_v, &fresh);
      return Formula::exists(v, field_sort, Formula::conj(eq, shifted));
    }

    case StmtKind::Seq: {
      FormulaPtr mid = sp_step(spec, std::move(p), s->s1, fresh, introduced);
      return sp_step(spec, std::move(mid), s->s2, fresh, introduced);
    }
  }
  return p;
}

void collect_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FormulaKind::And) {
    collect_conjuncts(f->f1, out);
    collect_conjuncts(f->f2, out);
    return;
  }
  if (f->kind == FormulaKind::BoolLit && f->bool_value) return;  // drop `true`
  out.push_back(f);
}

}  // namespace

SpResult sp(const Spec& spec, const FormulaPtr& pre, const StmtPtr& body) {
  std::set<std::string> used = spec_identifiers(spec);
  for (const auto& v : free_vars(pre)) used.insert(v);
  FreshNames fresh(std::move(used));

  SpResult result;
  result.formula = sp_step(spec, clone_formula(pre), body, fresh, result.fresh_vars);
  return result;
}

FormulaPtr simplify(const FormulaPtr& fp) {
  const Formula& f = *fp;
  switch (f.kind) {
    case FormulaKind::And: {
      std::vector<FormulaPtr> parts;
      collect_conjuncts(simplify(f.f1), parts);
      collect_conjuncts(simplify(f.f2), parts);
      if (parts.empty()) return Formula::bool_lit(true, f.span);
      FormulaPtr acc = parts.back();
      for (size_t i = parts.size() - 1; i-- > 0;) acc = Formula::conj(parts[i], acc);
      return acc;
    }
    case FormulaKind::Not: {
      auto out = std::make_shared<Formula>(f);
      out->f1 = simplify(f.f1);
      return out;
    }
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      auto out = std::make_shared<Formula>(f);
      out->f1 = simplify(f.f1);
      out->f2 = simplify(f.f2);
      return out;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      FormulaPtr body = simplify(f.f1);
      if (f.kind == FormulaKind::Exists && !free_vars(body).count(f.binder))
        return body;
      auto out = std::make_shared<Formula>(f);
      out->f1 = body;
      return out;
    }
    default:
      return fp;
  }
}

SpForOpResult sp_for_op(const Spec& spec, const std::string& op_name, bool force) {
  SpForOpResult out;
  const OpDecl* op = spec.find_op(op_name);
  if (!op) {
    out.error = "unknown operation: " + op_name;
    return out;
  }
  if (!op->ensures_clauses.empty() && !force) {
    out.error = "operation '" + op_name +
                "' already declares ensures clauses (use --force to ignore them)";
    return out;
  }
  FormulaPtr pre = Formula::conj_all(op->requires_clauses);
  SpResult r = sp(spec, pre, op->body);
  out.formula = simplify(r.formula);
  out.fresh_vars = std::move(r.fresh_vars);
  return out;
}

std::string sp_print(const Spec& spec, const std::string& op_name, const FormulaPtr& f) {
  const OpDecl* op = spec.find_op(op_name);
  PrintContext ctx;
  if (op) ctx.state_param = op->state_param;

  ctx.annotate_binders = false;
  std::string plain = print_formula(f, ctx);
  if (op) {
    FormulaParseResult back = parse_formula_in_op_scope(spec, op_name, plain);
    if (back.formula && alpha_equal(back.formula, f)) return plain;
  }
  ctx.annotate_binders = true;
  return print_formula(f, ctx);
}

}  // namespace cise
