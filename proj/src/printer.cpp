#include "printer.hpp"

#include <sstream>

namespace cise {

namespace {

std::string field_path(const Expr& e, const PrintContext& ctx) {
  switch (e.scope) {
    case FieldScope::Current:
      return ctx.bare_fields ? e.name : ctx.state_param + "." + e.name;
    case FieldScope::Old:
      return "(old " + ctx.state_param + ")." + e.name;
    case FieldScope::Left:
      return ctx.left_param + "." + e.name;
    case FieldScope::Right:
      return ctx.right_param + "." + e.name;
  }
  return e.name;
}

// Expression precedence: additive operators vs. atoms.
std::string expr_str(const ExprPtr& ep, const PrintContext& ctx, bool atom_pos) {
  const Expr& e = *ep;
  switch (e.kind) {
    case ExprKind::IntLit: {
      std::string s = std::to_string(e.int_value);
      return (e.int_value < 0 && atom_pos) ? "(" + s + ")" : s;
    }
    case ExprKind::Var:
      return e.name;
    case ExprKind::FieldRead:
      return field_path(e, ctx);
    case ExprKind::MkPair:
      return "(" + expr_str(e.a, ctx, false) + ", " + expr_str(e.b, ctx, false) + ")";
    case ExprKind::Fst:
      return "fst(" + expr_str(e.a, ctx, false) + ")";
    case ExprKind::Snd:
      return "snd(" + expr_str(e.a, ctx, false) + ")";
    case ExprKind::EmptySet:
      return "empty";
    case ExprKind::SetAdd:
      return "add(" + expr_str(e.a, ctx, false) + ", " + expr_str(e.b, ctx, false) + ")";
    case ExprKind::SetRemove:
      return "remove(" + expr_str(e.a, ctx, false) + ", " + expr_str(e.b, ctx, false) +
             ")";
    case ExprKind::AddInt:
    case ExprKind::SubInt: {
      std::string s = expr_str(e.a, ctx, false) +
                      (e.kind == ExprKind::AddInt ? " + " : " - ") +
                      expr_str(e.b, ctx, true);
      return atom_pos ? "(" + s + ")" : s;
    }
  }
  return "?";
}

// Formula precedence levels, loosest first.
enum Prec { PIff = 0, PImplies, POr, PAnd, PNot, PAtom };

Prec prec_of(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Iff:
      return PIff;
    case FormulaKind::Implies:
      return PImplies;
    case FormulaKind::Or:
      return POr;
    case FormulaKind::And:
      return PAnd;
    case FormulaKind::Not:
      return PNot;
    default:
      return PAtom;
  }
}

const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ne:
      return "<>";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

std::string formula_str(const FormulaPtr& fp, const PrintContext& ctx, Prec min_prec) {
  const Formula& f = *fp;
  std::string s;
  switch (f.kind) {
    case FormulaKind::BoolLit:
      s = f.bool_value ? "true" : "false";
      break;
    case FormulaKind::Cmp:
      s = expr_str(f.e1, ctx, false) + " " + cmp_str(f.cmp) + " " +
          expr_str(f.e2, ctx, false);
      return min_prec > PAtom ? "(" + s + ")" : s;
    case FormulaKind::Mem:
      s = "mem(" + expr_str(f.e1, ctx, false) + ", " + expr_str(f.e2, ctx, false) + ")";
      break;
    case FormulaKind::IsEmpty:
      s = "is_empty(" + expr_str(f.e1, ctx, false) + ")";
      break;
    case FormulaKind::SetEq:
      s = expr_str(f.e1, ctx, false) + " == " + expr_str(f.e2, ctx, false);
      return min_prec > PAtom ? "(" + s + ")" : s;
    case FormulaKind::BoolAtom:
      s = expr_str(f.e1, ctx, true);
      break;
    case FormulaKind::Not: {
      const Formula& c = *f.f1;
      bool self_delimiting = c.kind == FormulaKind::BoolLit ||
                             c.kind == FormulaKind::Mem ||
                             c.kind == FormulaKind::IsEmpty ||
                             c.kind == FormulaKind::BoolAtom ||
                             c.kind == FormulaKind::Not;
      s = "not " + (self_delimiting ? formula_str(f.f1, ctx, PNot)
                                    : "(" + formula_str(f.f1, ctx, PIff) + ")");
      return min_prec > PNot ? "(" + s + ")" : s;
    }
    case FormulaKind::And:
      s = formula_str(f.f1, ctx, PAnd) + " && " + formula_str(f.f2, ctx, PNot);
      return min_prec > PAnd ? "(" + s + ")" : s;
    case FormulaKind::Or:
      s = formula_str(f.f1, ctx, POr) + " || " + formula_str(f.f2, ctx, PAnd);
      return min_prec > POr ? "(" + s + ")" : s;
    case FormulaKind::Implies:
      s = formula_str(f.f1, ctx, POr) + " -> " + formula_str(f.f2, ctx, PImplies);
      return min_prec > PImplies ? "(" + s + ")" : s;
    case FormulaKind::Iff:
      s = formula_str(f.f1, ctx, PImplies) + " <-> " + formula_str(f.f2, ctx, PImplies);
      return min_prec > PIff ? "(" + s + ")" : s;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      s = (f.kind == FormulaKind::Forall ? "forall " : "exists ") + f.binder;
      if (ctx.annotate_binders && f.binder_sort && !f.binder_sort->is_int())
        s += " : " + print_sort(*f.binder_sort);
      s += ". " + formula_str(f.f1, ctx, PIff);
      return min_prec > PIff ? "(" + s + ")" : s;
    }
  }
  return s;
}

}  // namespace

std::string print_sort(const Sort& s) { return s.str(); }

std::string print_expr(const ExprPtr& e, const PrintContext& ctx) {
  return expr_str(e, ctx, false);
}

std::string print_formula(const FormulaPtr& f, const PrintContext& ctx) {
  return formula_str(f, ctx, PIff);
}

std::string print_stmt(const StmtPtr& sp, const PrintContext& ctx) {
  const Stmt& s = *sp;
  switch (s.kind) {
    case StmtKind::Skip:
      return "skip";
    case StmtKind::Assign:
      return ctx.state_param + "." + s.field + " <- " + expr_str(s.value, ctx, false);
    case StmtKind::Seq:
      return print_stmt(s.s1, ctx) + ";\n  " + print_stmt(s.s2, ctx);
  }
  return "";
}

std::string print_spec(const Spec& spec) {
  std::ostringstream os;

  os << "type " << spec.state.type_name << " [@state] = {\n";
  for (size_t i = 0; i < spec.state.fields.size(); ++i) {
    const FieldDecl& fd = spec.state.fields[i];
    auto dot = fd.name.find('.');
    if (dot != std::string::npos) {
      std::string base = fd.name.substr(0, dot);
      const RwFieldInfo* rw = spec.state.rw_info(base);
      if (rw && fd.name.substr(dot + 1) == "remove_wins_add") {
        os << "  mutable " << base << " : remove_wins_set " << print_sort(rw->elem)
           << ";\n";
      }
      continue;  // the removes component is covered by the add component line
    }
    os << "  mutable " << fd.name << " : " << print_sort(fd.sort) << ";\n";
  }
  os << "}";

  PrintContext inv_ctx;
  inv_ctx.bare_fields = true;
  if (spec.state.invariant &&
      !(spec.state.invariant->kind == FormulaKind::BoolLit &&
        spec.state.invariant->bool_value))
    os << " invariant { " << print_formula(spec.state.invariant, inv_ctx) << " }";
  os << "\n";

  for (const OpDecl& op : spec.ops) {
    os << "\nlet ghost " << op.name;
    for (const ParamDecl& p : op.params)
      os << " (" << p.name << " : " << print_sort(p.sort) << ")";
    os << " (" << op.state_param << " : " << spec.state.type_name << ") : unit\n";

    PrintContext ctx;
    ctx.state_param = op.state_param;
    for (const auto& r : op.requires_clauses)
      os << "  requires { " << print_formula(r, ctx) << " }\n";
    for (const auto& q : op.ensures_clauses)
      os << "  ensures  { " << print_formula(q, ctx) << " }\n";
    os << "= " << print_stmt(op.body, ctx) << "\n";
  }

  if (spec.state_eq) {
    const StateEqDecl& eq = *spec.state_eq;
    PrintContext ctx;
    ctx.left_param = eq.left_param;
    ctx.right_param = eq.right_param;
    os << "\npredicate " << eq.pred_name << " [@state_eq] (" << eq.left_param << " "
       << eq.right_param << " : " << spec.state.type_name << ") =\n  "
       << print_formula(eq.body, ctx) << "\n";
  }

  return os.str();
}

}  // namespace cise
