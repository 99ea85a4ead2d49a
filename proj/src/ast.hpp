#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cise {

// 1-based source position; length in bytes (0 when unknown).
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  std::string str() const;
};

// ---------------------------------------------------------------------------
// Sorts
// ---------------------------------------------------------------------------

enum class SortKind { Int, Bool, Pair, Set };

class Sort {
 public:
  Sort() = default;

  static Sort integer();
  static Sort boolean();
  static Sort pair(const Sort& first, const Sort& second);
  static Sort set(const Sort& elem);

  SortKind kind() const { return kind_; }
  bool is_int() const { return kind_ == SortKind::Int; }
  bool is_bool() const { return kind_ == SortKind::Bool; }
  bool is_pair() const { return kind_ == SortKind::Pair; }
  bool is_set() const { return kind_ == SortKind::Set; }

  const Sort& first() const { return *a_; }   // Pair
  const Sort& second() const { return *b_; }  // Pair
  const Sort& elem() const { return *a_; }    // Set

  bool operator==(const Sort& o) const;
  bool operator!=(const Sort& o) const { return !(*this == o); }

  std::string str() const;

 private:
  SortKind kind_ = SortKind::Int;
  std::shared_ptr<const Sort> a_, b_;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

// Which snapshot a state-field read refers to.
//   Current / Old   -- inside operation contracts and bodies
//   Left / Right    -- inside a state-equality predicate body
enum class FieldScope { Current, Old, Left, Right };

enum class ExprKind {
  IntLit,
  Var,        // operation parameter or quantifier-bound variable
  FieldRead,  // state field, possibly old/left/right scoped
  MkPair,
  Fst,
  Snd,
  EmptySet,
  SetAdd,     // add(e, S)
  SetRemove,  // remove(e, S)
  AddInt,
  SubInt,
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind;
  SourceSpan span;
  std::optional<Sort> sort;  // assigned by the typechecker

  long long int_value = 0;                  // IntLit
  std::string name;                         // Var / FieldRead (flattened field name)
  FieldScope scope = FieldScope::Current;   // FieldRead
  int state_copy = 0;                       // FieldRead in analysis-task formulas (0 or 1)
  ExprPtr a, b;                             // children
  std::optional<Sort> elem_sort;            // EmptySet element annotation

  static ExprPtr int_lit(long long v, SourceSpan sp = {});
  static ExprPtr var(std::string name, SourceSpan sp = {});
  static ExprPtr field(std::string name, FieldScope scope = FieldScope::Current,
                       SourceSpan sp = {});
  static ExprPtr mk_pair(ExprPtr x, ExprPtr y, SourceSpan sp = {});
  static ExprPtr fst(ExprPtr p, SourceSpan sp = {});
  static ExprPtr snd(ExprPtr p, SourceSpan sp = {});
  static ExprPtr empty_set(std::optional<Sort> elem = {}, SourceSpan sp = {});
  static ExprPtr set_add(ExprPtr e, ExprPtr s, SourceSpan sp = {});
  static ExprPtr set_remove(ExprPtr e, ExprPtr s, SourceSpan sp = {});
  static ExprPtr add_int(ExprPtr x, ExprPtr y, SourceSpan sp = {});
  static ExprPtr sub_int(ExprPtr x, ExprPtr y, SourceSpan sp = {});
};

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class FormulaKind {
  BoolLit,
  Cmp,       // =, <>, <, <=, >, >= (equality also over bool/pair/set operands)
  Mem,       // mem(e, S)
  IsEmpty,   // is_empty(S)
  SetEq,     // S1 == S2 (extensional)
  BoolAtom,  // bool-sorted expression used as an atom
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Formula;
using FormulaPtr = std::shared_ptr<Formula>;

struct Formula {
  FormulaKind kind;
  SourceSpan span;

  bool bool_value = false;           // BoolLit
  CmpOp cmp = CmpOp::Eq;             // Cmp
  ExprPtr e1, e2;                    // Cmp / Mem / IsEmpty(e1=set) / SetEq / BoolAtom(e1)
  FormulaPtr f1, f2;                 // connectives; quantifier body in f1
  std::string binder;                // Forall / Exists
  std::optional<Sort> binder_sort;   // may be inferred by the typechecker

  static FormulaPtr bool_lit(bool v, SourceSpan sp = {});
  static FormulaPtr compare(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan sp = {});
  static FormulaPtr mem(ExprPtr e, ExprPtr s, SourceSpan sp = {});
  static FormulaPtr is_empty(ExprPtr s, SourceSpan sp = {});
  static FormulaPtr set_eq(ExprPtr a, ExprPtr b, SourceSpan sp = {});
  static FormulaPtr bool_atom(ExprPtr e, SourceSpan sp = {});
  static FormulaPtr negation(FormulaPtr f, SourceSpan sp = {});
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b, SourceSpan sp = {});
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b, SourceSpan sp = {});
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b, SourceSpan sp = {});
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b, SourceSpan sp = {});
  static FormulaPtr forall(std::string v, std::optional<Sort> s, FormulaPtr body,
                           SourceSpan sp = {});
  static FormulaPtr exists(std::string v, std::optional<Sort> s, FormulaPtr body,
                           SourceSpan sp = {});

  // Conjunction of a clause list; empty list yields `true`.
  static FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind { Skip, Assign, Seq };

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Stmt {
  StmtKind kind;
  SourceSpan span;
  std::string field;  // Assign target (flattened field name)
  ExprPtr value;      // Assign
  StmtPtr s1, s2;     // Seq

  static StmtPtr skip(SourceSpan sp = {});
  static StmtPtr assign(std::string field, ExprPtr value, SourceSpan sp = {});
  static StmtPtr seq(StmtPtr a, StmtPtr b, SourceSpan sp = {});
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct FieldDecl {
  std::string name;  // flattened; remove_wins_set components use "f.remove_wins_add" etc.
  Sort sort;
  SourceSpan span;
};

// Original remove_wins_set declaration, kept for printing and in_set/equal
// resolution. The flattened component fields live in StateDecl::fields.
struct RwFieldInfo {
  std::string name;
  Sort elem;
  SourceSpan span;
};

struct StateDecl {
  std::string type_name;
  std::vector<FieldDecl> fields;
  std::vector<RwFieldInfo> rw_fields;
  FormulaPtr invariant;  // never null; defaults to `true`
  SourceSpan span;

  int field_index(const std::string& name) const;  // -1 when absent
  const RwFieldInfo* rw_info(const std::string& name) const;
};

struct ParamDecl {
  std::string name;
  Sort sort;
  SourceSpan span;
};

struct OpDecl {
  std::string name;
  SourceSpan span;
  std::vector<ParamDecl> params;  // excludes the state parameter
  std::string state_param;
  std::vector<FormulaPtr> requires_clauses;
  std::vector<FormulaPtr> ensures_clauses;
  StmtPtr body;  // never null; Skip when empty
};

struct StateEqDecl {
  std::string pred_name;
  std::string left_param, right_param;
  FormulaPtr body;  // field reads carry FieldScope::Left / FieldScope::Right
  SourceSpan span;
};

struct Spec {
  std::string source_file;
  StateDecl state;
  std::vector<OpDecl> ops;
  std::optional<StateEqDecl> state_eq;

  const OpDecl* find_op(const std::string& name) const;
};

}  // namespace cise
