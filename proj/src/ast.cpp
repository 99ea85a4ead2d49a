#include "ast.hpp"

#include <sstream>

namespace cise {

std::string SourceSpan::str() const {
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file) << ":" << line << ":" << column;
  return os.str();
}

// ---- Sort ----

Sort Sort::integer() { return Sort{}; }

Sort Sort::boolean() {
  Sort s;
  s.kind_ = SortKind::Bool;
  return s;
}

Sort Sort::pair(const Sort& first, const Sort& second) {
  Sort s;
  s.kind_ = SortKind::Pair;
  s.a_ = std::make_shared<Sort>(first);
  s.b_ = std::make_shared<Sort>(second);
  return s;
}

Sort Sort::set(const Sort& elem) {
  Sort s;
  s.kind_ = SortKind::Set;
  s.a_ = std::make_shared<Sort>(elem);
  return s;
}

bool Sort::operator==(const Sort& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case SortKind::Int:
    case SortKind::Bool:
      return true;
    case SortKind::Pair:
      return *a_ == *o.a_ && *b_ == *o.b_;
    case SortKind::Set:
      return *a_ == *o.a_;
  }
  return false;
}

std::string Sort::str() const {
  switch (kind_) {
    case SortKind::Int:
      return "int";
    case SortKind::Bool:
      return "bool";
    case SortKind::Pair:
      return "(" + a_->str() + ", " + b_->str() + ")";
    case SortKind::Set:
      return "fset " + a_->str();
  }
  return "?";
}

// ---- Expr constructors ----

static ExprPtr mk_expr(ExprKind k, SourceSpan sp) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = std::move(sp);
  return e;
}

ExprPtr Expr::int_lit(long long v, SourceSpan sp) {
  auto e = mk_expr(ExprKind::IntLit, std::move(sp));
  e->int_value = v;
  return e;
}

ExprPtr Expr::var(std::string name, SourceSpan sp) {
  auto e = mk_expr(ExprKind::Var, std::move(sp));
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::field(std::string name, FieldScope scope, SourceSpan sp) {
  auto e = mk_expr(ExprKind::FieldRead, std::move(sp));
  e->name = std::move(name);
  e->scope = scope;
  return e;
}

ExprPtr Expr::mk_pair(ExprPtr x, ExprPtr y, SourceSpan sp) {
  auto e = mk_expr(ExprKind::MkPair, std::move(sp));
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

ExprPtr Expr::fst(ExprPtr p, SourceSpan sp) {
  auto e = mk_expr(ExprKind::Fst, std::move(sp));
  e->a = std::move(p);
  return e;
}

ExprPtr Expr::snd(ExprPtr p, SourceSpan sp) {
  auto e = mk_expr(ExprKind::Snd, std::move(sp));
  e->a = std::move(p);
  return e;
}

ExprPtr Expr::empty_set(std::optional<Sort> elem, SourceSpan sp) {
  auto e = mk_expr(ExprKind::EmptySet, std::move(sp));
  e->elem_sort = std::move(elem);
  return e;
}

ExprPtr Expr::set_add(ExprPtr el, ExprPtr s, SourceSpan sp) {
  auto e = mk_expr(ExprKind::SetAdd, std::move(sp));
  e->a = std::move(el);
  e->b = std::move(s);
  return e;
}

ExprPtr Expr::set_remove(ExprPtr el, ExprPtr s, SourceSpan sp) {
  auto e = mk_expr(ExprKind::SetRemove, std::move(sp));
  e->a = std::move(el);
  e->b = std::move(s);
  return e;
}

ExprPtr Expr::add_int(ExprPtr x, ExprPtr y, SourceSpan sp) {
  auto e = mk_expr(ExprKind::AddInt, std::move(sp));
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

ExprPtr Expr::sub_int(ExprPtr x, ExprPtr y, SourceSpan sp) {
  auto e = mk_expr(ExprKind::SubInt, std::move(sp));
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

// ---- Formula constructors ----

static FormulaPtr mk_formula(FormulaKind k, SourceSpan sp) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->span = std::move(sp);
  return f;
}

FormulaPtr Formula::bool_lit(bool v, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::BoolLit, std::move(sp));
  f->bool_value = v;
  return f;
}

FormulaPtr Formula::compare(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Cmp, std::move(sp));
  f->cmp = op;
  f->e1 = std::move(a);
  f->e2 = std::move(b);
  return f;
}

FormulaPtr Formula::mem(ExprPtr e, ExprPtr s, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Mem, std::move(sp));
  f->e1 = std::move(e);
  f->e2 = std::move(s);
  return f;
}

FormulaPtr Formula::is_empty(ExprPtr s, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::IsEmpty, std::move(sp));
  f->e1 = std::move(s);
  return f;
}

FormulaPtr Formula::set_eq(ExprPtr a, ExprPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::SetEq, std::move(sp));
  f->e1 = std::move(a);
  f->e2 = std::move(b);
  return f;
}

FormulaPtr Formula::bool_atom(ExprPtr e, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::BoolAtom, std::move(sp));
  f->e1 = std::move(e);
  return f;
}

FormulaPtr Formula::negation(FormulaPtr g, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Not, std::move(sp));
  f->f1 = std::move(g);
  return f;
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::And, std::move(sp));
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Or, std::move(sp));
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Implies, std::move(sp));
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b, SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Iff, std::move(sp));
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

FormulaPtr Formula::forall(std::string v, std::optional<Sort> s, FormulaPtr body,
                           SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Forall, std::move(sp));
  f->binder = std::move(v);
  f->binder_sort = std::move(s);
  f->f1 = std::move(body);
  return f;
}

FormulaPtr Formula::exists(std::string v, std::optional<Sort> s, FormulaPtr body,
                           SourceSpan sp) {
  auto f = mk_formula(FormulaKind::Exists, std::move(sp));
  f->binder = std::move(v);
  f->binder_sort = std::move(s);
  f->f1 = std::move(body);
  return f;
}

FormulaPtr Formula::conj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return bool_lit(true);
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

// ---- Stmt constructors ----

StmtPtr Stmt::skip(SourceSpan sp) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Skip;
  s->span = std::move(sp);
  return s;
}

StmtPtr Stmt::assign(std::string field, ExprPtr value, SourceSpan sp) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Assign;
  s->span = std::move(sp);
  s->field = std::move(field);
  s->value = std::move(value);
  return s;
}

StmtPtr Stmt::seq(StmtPtr a, StmtPtr b, SourceSpan sp) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Seq;
  s->span = std::move(sp);
  s->s1 = std::move(a);
  s->s2 = std::move(b);
  return s;
}

// ---- Declarations ----

int StateDecl::field_index(const std::string& name) const {
  for (size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == name) return static_cast<int>(i);
  return -1;
}

const RwFieldInfo* StateDecl::rw_info(const std::string& name) const {
  for (const auto& rw : rw_fields)
    if (rw.name == name) return &rw;
  return nullptr;
}

const OpDecl* Spec::find_op(const std::string& name) const {
  for (const auto& op : ops)
    if (op.name == name) return &op;
  return nullptr;
}

}  // namespace cise
