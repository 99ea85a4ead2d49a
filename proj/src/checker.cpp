#include "checker.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>
#include <thread>

#include "subst.hpp"

namespace cise {

namespace {

// ---------------------------------------------------------------------------
// Value encodings for the fast engine
//
//   int        raw value
//   bool       0 / 1
//   (int,int)  (x+OFF) << PAIR_SHIFT | (y+OFF)
//   fset T     characteristic bitmask over the bounded element domain
// ---------------------------------------------------------------------------

constexpr int kPairShift = 21;
constexpr long long kPairOff = 1LL << 20;
constexpr long long kPairMask = (1LL << kPairShift) - 1;

long long pack_pair(long long x, long long y) {
  return ((x + kPairOff) << kPairShift) | (y + kPairOff);
}
long long pair_fst(long long p) { return (p >> kPairShift) - kPairOff; }
long long pair_snd(long long p) { return (p & kPairMask) - kPairOff; }

// Raised when a construct falls outside the fast engine's encodings; the
// caller falls back to the reference implementation.
struct FastUnsupported {
  std::string reason;
};

struct Domain {
  enum Kind { Int, Bool, PairII, SetInt, SetPair } kind = Int;
  long long lo = 0;
  int n = 0;           // interval size
  long long count = 0; // enumerable values

  long long raw_at(long long idx) const {
    switch (kind) {
      case Int:
        return lo + idx;
      case Bool:
        return idx;
      case PairII:
        return pack_pair(lo + idx / n, lo + idx % n);
      case SetInt:
      case SetPair:
        return idx;  // bitmask
    }
    return 0;
  }
};

Domain domain_for(const Sort& sort, const DomainBounds& b, const std::string& who) {
  Domain d;
  d.lo = b.lo;
  d.n = static_cast<int>(b.size());
  switch (sort.kind()) {
    case SortKind::Int:
      d.kind = Domain::Int;
      d.count = d.n;
      return d;
    case SortKind::Bool:
      d.kind = Domain::Bool;
      d.count = 2;
      return d;
    case SortKind::Pair:
      if (!sort.first().is_int() || !sort.second().is_int())
        throw FastUnsupported{"nested pair sorts"};
      d.kind = Domain::PairII;
      d.count = static_cast<long long>(d.n) * d.n;
      return d;
    case SortKind::Set: {
      int bits;
      if (sort.elem().is_int()) {
        d.kind = Domain::SetInt;
        bits = d.n;
      } else {
        d.kind = Domain::SetPair;
        bits = d.n * d.n;
      }
      if (bits > 22)
        throw ConfigError("domain of '" + who + "' is too large to enumerate (" +
                          std::to_string(bits) + " element bits)");
      d.count = 1LL << bits;
      return d;
    }
  }
  throw FastUnsupported{"unknown sort"};
}

Value decode_raw(long long raw, const Sort& sort, const DomainBounds& b) {
  switch (sort.kind()) {
    case SortKind::Int:
      return Value::integer(raw);
    case SortKind::Bool:
      return Value::boolean(raw != 0);
    case SortKind::Pair:
      return Value::pair(Value::integer(pair_fst(raw)), Value::integer(pair_snd(raw)));
    case SortKind::Set: {
      std::vector<Value> elems;
      int n = static_cast<int>(b.size());
      if (sort.elem().is_int()) {
        for (int i = 0; i < n; ++i)
          if (raw & (1LL << i)) elems.push_back(Value::integer(b.lo + i));
      } else {
        for (int i = 0; i < n * n; ++i)
          if (raw & (1LL << i))
            elems.push_back(Value::pair(Value::integer(b.lo + i / n),
                                        Value::integer(b.lo + i % n)));
      }
      return Value::set(std::move(elems));
    }
  }
  return Value::integer(0);
}

// ---------------------------------------------------------------------------
// Trivial syntactic simplification (used to discharge goals whose sides are
// structurally identical and to drop aliased state-equality conjuncts)
// ---------------------------------------------------------------------------

FormulaPtr trivial_simplify(const FormulaPtr& f) {
  auto lit = [](bool v) { return Formula::bool_lit(v); };
  auto is_lit = [](const FormulaPtr& g, bool v) {
    return g->kind == FormulaKind::BoolLit && g->bool_value == v;
  };
  switch (f->kind) {
    case FormulaKind::Cmp:
      if (f->cmp == CmpOp::Eq && expr_equal(f->e1, f->e2)) return lit(true);
      if (f->cmp == CmpOp::Le && expr_equal(f->e1, f->e2)) return lit(true);
      if (f->cmp == CmpOp::Ge && expr_equal(f->e1, f->e2)) return lit(true);
      return f;
    case FormulaKind::SetEq:
      if (expr_equal(f->e1, f->e2)) return lit(true);
      return f;
    case FormulaKind::Not: {
      FormulaPtr a = trivial_simplify(f->f1);
      if (a->kind == FormulaKind::BoolLit) return lit(!a->bool_value);
      auto out = std::make_shared<Formula>(*f);
      out->f1 = a;
      return out;
    }
    case FormulaKind::And: {
      FormulaPtr a = trivial_simplify(f->f1);
      FormulaPtr b = trivial_simplify(f->f2);
      if (is_lit(a, false) || is_lit(b, false)) return lit(false);
      if (is_lit(a, true)) return b;
      if (is_lit(b, true)) return a;
      auto out = std::make_shared<Formula>(*f);
      out->f1 = a;
      out->f2 = b;
      return out;
    }
    case FormulaKind::Or: {
      FormulaPtr a = trivial_simplify(f->f1);
      FormulaPtr b = trivial_simplify(f->f2);
      if (is_lit(a, true) || is_lit(b, true)) return lit(true);
      if (is_lit(a, false)) return b;
      if (is_lit(b, false)) return a;
      auto out = std::make_shared<Formula>(*f);
      out->f1 = a;
      out->f2 = b;
      return out;
    }
    case FormulaKind::Implies: {
      FormulaPtr a = trivial_simplify(f->f1);
      FormulaPtr b = trivial_simplify(f->f2);
      if (is_lit(a, false) || is_lit(b, true)) return lit(true);
      if (is_lit(a, true)) return b;
      auto out = std::make_shared<Formula>(*f);
      out->f1 = a;
      out->f2 = b;
      return out;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      FormulaPtr a = trivial_simplify(f->f1);
      if (a->kind == FormulaKind::BoolLit) return a;
      auto out = std::make_shared<Formula>(*f);
      out->f1 = a;
      return out;
    }
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// Symbolic task preparation: every goal becomes a closed formula over the
// task variables by pushing the straight-line program's assignments through
// as substitutions.
// ---------------------------------------------------------------------------

using SymState = std::vector<ExprPtr>;  // per flattened field

struct PreparedGoal {
  const ProofGoal* goal;
  FormulaPtr formula;       // over task variables only
  bool trivially_true = false;
};

struct PreparedTask {
  std::vector<TaskVar> order;           // slot order: args, then field variables
  std::map<std::string, int> slot_of;
  std::vector<FormulaPtr> assumption;   // conjuncts over task variables
  std::vector<PreparedGoal> goals;
  bool aliased = false;                 // copy 2 shares copy 1's variables
};

std::string copy_tag(const AnalysisTask& task, int copy) {
  if (task.state_copies == 1) return "state";
  return "state" + std::to_string(copy + 1);
}

void collect_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FormulaKind::And) {
    collect_conjuncts(f->f1, out);
    collect_conjuncts(f->f2, out);
    return;
  }
  if (f->kind == FormulaKind::BoolLit && f->bool_value) return;
  out.push_back(f);
}

SymState sym_exec_call(const Spec& spec, const TaskCall& call, const SymState& in) {
  const OpDecl& op = *spec.find_op(call.op);
  Substitution base;
  for (size_t i = 0; i < op.params.size(); ++i) {
    ExprPtr v = Expr::var(call.args[i]);
    v->sort = op.params[i].sort;
    base.map_var(op.params[i].name, v);
  }

  SymState cur = in;
  // Straight-line execution; later assignments see earlier writes.
  std::vector<const Stmt*> stack;
  std::vector<const Stmt*> linear;
  const Stmt* s = op.body.get();
  for (;;) {
    while (s->kind == StmtKind::Seq) {
      stack.push_back(s->s2.get());
      s = s->s1.get();
    }
    linear.push_back(s);
    if (stack.empty()) break;
    s = stack.back();
    stack.pop_back();
  }
  for (const Stmt* st : linear) {
    if (st->kind != StmtKind::Assign) continue;
    Substitution sub = base;
    for (size_t i = 0; i < spec.state.fields.size(); ++i)
      sub.map_field(spec.state.fields[i].name, FieldScope::Current, 0, cur[i]);
    int idx = spec.state.field_index(st->field);
    cur[static_cast<size_t>(idx)] = substitute(st->value, sub);
  }
  return cur;
}

PreparedTask prepare_task(const Spec& spec, const AnalysisTask& task) {
  PreparedTask prep;
  prep.aliased = task.state_copies == 2 && task.state_eq_pointwise;

  for (const auto& v : task.vars) {
    prep.slot_of[v.name] = static_cast<int>(prep.order.size());
    prep.order.push_back(v);
  }
  int copies_enumerated = prep.aliased ? 1 : task.state_copies;
  for (int c = 0; c < copies_enumerated; ++c) {
    for (const auto& fd : spec.state.fields) {
      std::string name = copy_tag(task, c) + "." + fd.name;
      prep.slot_of[name] = static_cast<int>(prep.order.size());
      prep.order.push_back({name, fd.sort});
    }
  }

  // Initial symbolic states; an aliased second copy reads the first's vars.
  size_t nfields = spec.state.fields.size();
  std::vector<SymState> init(static_cast<size_t>(task.state_copies));
  for (int c = 0; c < task.state_copies; ++c) {
    int source = (prep.aliased && c == 1) ? 0 : c;
    init[c].resize(nfields);
    for (size_t i = 0; i < nfields; ++i) {
      ExprPtr v = Expr::var(copy_tag(task, source) + "." + spec.state.fields[i].name);
      v->sort = spec.state.fields[i].sort;
      init[c][i] = v;
    }
  }

  // timeline[t][c]: symbolic state of copy c after t calls.
  std::vector<std::vector<SymState>> timeline;
  timeline.push_back(init);
  for (const TaskCall& call : task.program) {
    std::vector<SymState> next = timeline.back();
    next[static_cast<size_t>(call.state)] =
        sym_exec_call(spec, call, next[static_cast<size_t>(call.state)]);
    timeline.push_back(std::move(next));
  }

  auto substituted = [&](const FormulaPtr& f, int eval_after, int old_at) {
    Substitution sub;
    for (int c = 0; c < task.state_copies; ++c) {
      for (size_t i = 0; i < nfields; ++i) {
        const std::string& fname = spec.state.fields[i].name;
        sub.map_field(fname, FieldScope::Current, c,
                      timeline[static_cast<size_t>(eval_after)][c][i]);
        if (old_at >= 0)
          sub.map_field(fname, FieldScope::Old, c,
                        timeline[static_cast<size_t>(old_at)][c][i]);
      }
    }
    FreshNames fresh(free_vars(f));
    for (const auto& v : prep.order) fresh.reserve(v.name);
    return substitute(f, sub, &fresh);
  };

  collect_conjuncts(trivial_simplify(substituted(task.assumption, 0, -1)),
                    prep.assumption);

  for (const ProofGoal& g : task.goals) {
    PreparedGoal pg;
    pg.goal = &g;
    pg.formula = trivial_simplify(substituted(g.formula, g.eval_after, g.old_at));
    pg.trivially_true =
        pg.formula->kind == FormulaKind::BoolLit && pg.formula->bool_value;
    prep.goals.push_back(std::move(pg));
  }
  return prep;
}

// ---------------------------------------------------------------------------
// Fast compiled evaluator
// ---------------------------------------------------------------------------

enum class COp : unsigned char {
  ConstI,
  ConstB,
  Var,
  MkPair,
  Fst,
  Snd,
  AddI,
  SubI,
  EmptySet,
  SetAdd,
  SetRemove,
  CmpEq,
  CmpNe,
  CmpLt,
  CmpLe,
  CmpGt,
  CmpGe,
  Mem,
  IsEmpty,
  SetEq,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
};

struct CNode {
  COp op;
  int a = -1, b = -1;
  long long imm = 0;
  int slot = -1;
  // set-element encoding for Mem/SetAdd/SetRemove
  bool elem_is_pair = false;
  // quantifier domain
  Domain dom;
};

class FastEval {
 public:
  FastEval(const DomainBounds& bounds, const std::vector<TaskVar>& vars,
           const std::map<std::string, int>& slot_of)
      : bounds_(bounds), slot_of_(&slot_of) {
    for (const auto& v : vars) var_sorts_.push_back(v.sort);
    next_slot_ = static_cast<int>(vars.size());
  }

  int num_slots() const { return next_slot_; }

  int compile(const FormulaPtr& f) {
    Sort unused;
    return compile_formula(f);
  }

  bool eval(int node, std::vector<long long>& env) const {
    return eval_node(node, env) != 0;
  }

  // Task variables read by the subtree; quantifier binder slots are internal
  // and excluded.
  std::vector<int> support(int root) const {
    std::vector<bool> seen(var_sorts_.size(), false);
    collect_support(root, seen);
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(seen.size()); ++i)
      if (seen[i]) out.push_back(i);
    return out;
  }

 private:
  int add(CNode n) {
    arena_.push_back(n);
    return static_cast<int>(arena_.size()) - 1;
  }

  [[noreturn]] void unsupported(const std::string& why) const {
    throw FastUnsupported{why};
  }

  struct Typed {
    int node;
    Sort sort;
  };

  Typed compile_expr(const ExprPtr& ep) {
    const Expr& e = *ep;
    switch (e.kind) {
      case ExprKind::IntLit:
        return {add({COp::ConstI, -1, -1, e.int_value}), Sort::integer()};
      case ExprKind::Var: {
        // innermost binder shadows task variables
        for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
          if (it->name == e.name) {
            CNode n{COp::Var};
            n.slot = it->slot;
            return {add(n), it->sort};
          }
        }
        auto sit = slot_of_->find(e.name);
        if (sit == slot_of_->end()) unsupported("unbound variable " + e.name);
        CNode n{COp::Var};
        n.slot = sit->second;
        return {add(n), var_sorts_[static_cast<size_t>(sit->second)]};
      }
      case ExprKind::FieldRead:
        unsupported("unsubstituted field read " + e.name);
      case ExprKind::MkPair: {
        Typed x = compile_expr(e.a);
        Typed y = compile_expr(e.b);
        if (!x.sort.is_int() || !y.sort.is_int()) unsupported("nested pair");
        return {add({COp::MkPair, x.node, y.node}), Sort::pair(x.sort, y.sort)};
      }
      case ExprKind::Fst:
      case ExprKind::Snd: {
        Typed p = compile_expr(e.a);
        if (!p.sort.is_pair()) unsupported("projection of non-pair");
        COp op = e.kind == ExprKind::Fst ? COp::Fst : COp::Snd;
        return {add({op, p.node}),
                e.kind == ExprKind::Fst ? p.sort.first() : p.sort.second()};
      }
      case ExprKind::EmptySet: {
        if (!e.elem_sort) unsupported("empty set without element sort");
        return {add({COp::EmptySet}), Sort::set(*e.elem_sort)};
      }
      case ExprKind::SetAdd:
      case ExprKind::SetRemove: {
        Typed el = compile_expr(e.a);
        Typed st = compile_expr(e.b);
        if (!st.sort.is_set()) unsupported("add/remove on non-set");
        CNode n{e.kind == ExprKind::SetAdd ? COp::SetAdd : COp::SetRemove, el.node,
                st.node};
        n.elem_is_pair = st.sort.elem().is_pair();
        return {add(n), st.sort};
      }
      case ExprKind::AddInt:
      case ExprKind::SubInt: {
        Typed x = compile_expr(e.a);
        Typed y = compile_expr(e.b);
        COp op = e.kind == ExprKind::AddInt ? COp::AddI : COp::SubI;
        return {add({op, x.node, y.node}), Sort::integer()};
      }
    }
    unsupported("malformed expression");
  }

  int compile_formula(const FormulaPtr& fp) {
    const Formula& f = *fp;
    switch (f.kind) {
      case FormulaKind::BoolLit:
        return add({COp::ConstB, -1, -1, f.bool_value ? 1 : 0});
      case FormulaKind::Cmp: {
        Typed a = compile_expr(f.e1);
        Typed b = compile_expr(f.e2);
        COp op;
        switch (f.cmp) {
          case CmpOp::Eq: op = COp::CmpEq; break;
          case CmpOp::Ne: op = COp::CmpNe; break;
          case CmpOp::Lt: op = COp::CmpLt; break;
          case CmpOp::Le: op = COp::CmpLe; break;
          case CmpOp::Gt: op = COp::CmpGt; break;
          case CmpOp::Ge: op = COp::CmpGe; break;
        }
        return add({op, a.node, b.node});
      }
      case FormulaKind::Mem: {
        Typed el = compile_expr(f.e1);
        Typed st = compile_expr(f.e2);
        if (!st.sort.is_set()) unsupported("mem on non-set");
        CNode n{COp::Mem, el.node, st.node};
        n.elem_is_pair = st.sort.elem().is_pair();
        return add(n);
      }
      case FormulaKind::IsEmpty:
        return add({COp::IsEmpty, compile_expr(f.e1).node});
      case FormulaKind::SetEq:
        return add({COp::SetEq, compile_expr(f.e1).node, compile_expr(f.e2).node});
      case FormulaKind::BoolAtom:
        return compile_expr(f.e1).node;
      case FormulaKind::Not:
        return add({COp::Not, compile_formula(f.f1)});
      case FormulaKind::And:
        return add({COp::And, compile_formula(f.f1), compile_formula(f.f2)});
      case FormulaKind::Or:
        return add({COp::Or, compile_formula(f.f1), compile_formula(f.f2)});
      case FormulaKind::Implies:
        return add({COp::Implies, compile_formula(f.f1), compile_formula(f.f2)});
      case FormulaKind::Iff:
        return add({COp::Iff, compile_formula(f.f1), compile_formula(f.f2)});
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        if (!f.binder_sort) unsupported("binder without sort");
        CNode n{f.kind == FormulaKind::Forall ? COp::Forall : COp::Exists};
        n.slot = next_slot_++;
        n.dom = domain_for(*f.binder_sort, bounds_, f.binder);
        binders_.push_back({f.binder, n.slot, *f.binder_sort});
        int body = compile_formula(f.f1);
        binders_.pop_back();
        n.a = body;
        return add(n);
      }
    }
    unsupported("malformed formula");
  }

  long long elem_bit(const CNode& n, long long elem) const {
    long long nn = bounds_.size();
    if (n.elem_is_pair) {
      long long x = pair_fst(elem) - bounds_.lo;
      long long y = pair_snd(elem) - bounds_.lo;
      if (x < 0 || x >= nn || y < 0 || y >= nn) return -1;
      return x * nn + y;
    }
    long long i = elem - bounds_.lo;
    if (i < 0 || i >= nn) return -1;
    return i;
  }

  long long eval_node(int idx, std::vector<long long>& env) const {
    const CNode& n = arena_[static_cast<size_t>(idx)];
    switch (n.op) {
      case COp::ConstI:
      case COp::ConstB:
        return n.imm;
      case COp::Var:
        return env[static_cast<size_t>(n.slot)];
      case COp::MkPair:
        return pack_pair(eval_node(n.a, env), eval_node(n.b, env));
      case COp::Fst:
        return pair_fst(eval_node(n.a, env));
      case COp::Snd:
        return pair_snd(eval_node(n.a, env));
      case COp::AddI:
        return eval_node(n.a, env) + eval_node(n.b, env);
      case COp::SubI:
        return eval_node(n.a, env) - eval_node(n.b, env);
      case COp::EmptySet:
        return 0;
      case COp::SetAdd: {
        long long bit = elem_bit(n, eval_node(n.a, env));
        if (bit < 0) throw FastUnsupported{"set element outside bounds"};
        return eval_node(n.b, env) | (1LL << bit);
      }
      case COp::SetRemove: {
        long long bit = elem_bit(n, eval_node(n.a, env));
        long long s = eval_node(n.b, env);
        return bit < 0 ? s : (s & ~(1LL << bit));
      }
      case COp::CmpEq:
        return eval_node(n.a, env) == eval_node(n.b, env);
      case COp::CmpNe:
        return eval_node(n.a, env) != eval_node(n.b, env);
      case COp::CmpLt:
        return eval_node(n.a, env) < eval_node(n.b, env);
      case COp::CmpLe:
        return eval_node(n.a, env) <= eval_node(n.b, env);
      case COp::CmpGt:
        return eval_node(n.a, env) > eval_node(n.b, env);
      case COp::CmpGe:
        return eval_node(n.a, env) >= eval_node(n.b, env);
      case COp::Mem: {
        long long bit = elem_bit(n, eval_node(n.a, env));
        if (bit < 0) return 0;
        return (eval_node(n.b, env) >> bit) & 1;
      }
      case COp::IsEmpty:
        return eval_node(n.a, env) == 0;
      case COp::SetEq:
        return eval_node(n.a, env) == eval_node(n.b, env);
      case COp::Not:
        return !eval_node(n.a, env);
      case COp::And:
        return eval_node(n.a, env) && eval_node(n.b, env);
      case COp::Or:
        return eval_node(n.a, env) || eval_node(n.b, env);
      case COp::Implies:
        return !eval_node(n.a, env) || eval_node(n.b, env);
      case COp::Iff:
        return eval_node(n.a, env) == eval_node(n.b, env);
      case COp::Forall:
      case COp::Exists: {
        bool is_forall = n.op == COp::Forall;
        for (long long i = 0; i < n.dom.count; ++i) {
          env[static_cast<size_t>(n.slot)] = n.dom.raw_at(i);
          bool r = eval_node(n.a, env) != 0;
          if (is_forall && !r) return 0;
          if (!is_forall && r) return 1;
        }
        return is_forall;
      }
    }
    return 0;
  }

  void collect_support(int idx, std::vector<bool>& seen) const {
    const CNode& n = arena_[static_cast<size_t>(idx)];
    if (n.op == COp::Var && n.slot < static_cast<int>(seen.size()))
      seen[static_cast<size_t>(n.slot)] = true;
    if (n.a >= 0) collect_support(n.a, seen);
    if (n.b >= 0) collect_support(n.b, seen);
  }

  struct Binder {
    std::string name;
    int slot;
    Sort sort;
  };

  DomainBounds bounds_;
  const std::map<std::string, int>* slot_of_;
  std::vector<Sort> var_sorts_;
  std::vector<CNode> arena_;
  std::vector<Binder> binders_;
  int next_slot_ = 0;
};

// ---------------------------------------------------------------------------
// Sweep: depth-first enumeration with constraints tested as soon as their
// variables are bound. Finds the lexicographically first assignment
// satisfying every test node, or nothing.
// ---------------------------------------------------------------------------

struct SweepPlan {
  std::vector<int> slots;              // enumerated slots, ascending
  std::vector<Domain> doms;            // aligned with slots
  std::vector<std::vector<int>> tests; // per depth, test nodes to evaluate
  std::vector<int> pre_tests;          // constant tests (no variables)
};

SweepPlan make_plan(const FastEval& ev, const std::vector<TaskVar>& order,
                    const DomainBounds& bounds, const std::vector<int>& test_nodes) {
  SweepPlan plan;
  std::vector<bool> in_plan(order.size(), false);
  std::vector<std::vector<int>> supports;
  supports.reserve(test_nodes.size());
  for (int t : test_nodes) {
    supports.push_back(ev.support(t));
    for (int s : supports.back()) in_plan[static_cast<size_t>(s)] = true;
  }
  std::vector<int> depth_of_slot(order.size(), -1);
  for (size_t i = 0; i < order.size(); ++i) {
    if (!in_plan[i]) continue;
    depth_of_slot[i] = static_cast<int>(plan.slots.size());
    plan.slots.push_back(static_cast<int>(i));
    plan.doms.push_back(domain_for(order[i].sort, bounds, order[i].name));
  }
  plan.tests.resize(plan.slots.size());
  for (size_t k = 0; k < test_nodes.size(); ++k) {
    int depth = -1;
    for (int s : supports[k]) depth = std::max(depth, depth_of_slot[static_cast<size_t>(s)]);
    if (depth < 0)
      plan.pre_tests.push_back(test_nodes[k]);
    else
      plan.tests[static_cast<size_t>(depth)].push_back(test_nodes[k]);
  }
  return plan;
}

// Depth-first search over one slice of the first variable's domain.
bool sweep_recurse(const FastEval& ev, const SweepPlan& plan, size_t depth,
                   std::vector<long long>& env, std::vector<long long>& out) {
  if (depth == plan.slots.size()) {
    out = env;
    return true;
  }
  const Domain& dom = plan.doms[depth];
  int slot = plan.slots[depth];
  for (long long i = 0; i < dom.count; ++i) {
    env[static_cast<size_t>(slot)] = dom.raw_at(i);
    bool pass = true;
    for (int t : plan.tests[depth])
      if (!ev.eval(t, env)) {
        pass = false;
        break;
      }
    if (pass && sweep_recurse(ev, plan, depth + 1, env, out)) return true;
  }
  return false;
}

bool sweep_slice(const FastEval& ev, const SweepPlan& plan,
                 std::vector<long long> env, long long first_idx,
                 std::atomic<long long>* best_first, std::vector<long long>& out) {
  const Domain& dom = plan.doms[0];
  int slot = plan.slots[0];
  env[static_cast<size_t>(slot)] = dom.raw_at(first_idx);
  if (best_first && first_idx > best_first->load(std::memory_order_relaxed))
    return false;
  for (int t : plan.tests[0])
    if (!ev.eval(t, env)) return false;
  if (!sweep_recurse(ev, plan, 1, env, out)) return false;
  if (best_first) {
    long long cur = best_first->load(std::memory_order_relaxed);
    while (first_idx < cur &&
           !best_first->compare_exchange_weak(cur, first_idx,
                                              std::memory_order_relaxed)) {
    }
  }
  return true;
}

// Returns the lexicographically first full assignment satisfying every test,
// with non-enumerated slots left at the template values.
std::optional<std::vector<long long>> sweep(const FastEval& ev, const SweepPlan& plan,
                                            const std::vector<long long>& env_template,
                                            int threads) {
  std::vector<long long> env = env_template;
  for (int t : plan.pre_tests)
    if (!ev.eval(t, env)) return std::nullopt;
  if (plan.slots.empty()) return env;

  long long d0 = plan.doms[0].count;
  if (threads <= 1 || d0 < 2) {
    std::vector<long long> out;
    for (long long i = 0; i < d0; ++i)
      if (sweep_slice(ev, plan, env, i, nullptr, out)) return out;
    return std::nullopt;
  }

  int nthreads = static_cast<int>(std::min<long long>(threads, d0));
  std::atomic<long long> best_first{d0};
  std::vector<std::optional<std::vector<long long>>> results(
      static_cast<size_t>(nthreads));
  std::vector<std::thread> workers;
  for (int t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t]() {
      std::vector<long long> out;
      for (long long i = t; i < d0; i += nthreads) {
        if (i > best_first.load(std::memory_order_relaxed)) return;
        if (sweep_slice(ev, plan, env, i, &best_first, out)) {
          results[static_cast<size_t>(t)] = out;
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();

  std::optional<std::vector<long long>> best;
  for (const auto& r : results) {
    if (!r) continue;
    if (!best) {
      best = r;
      continue;
    }
    for (int s : plan.slots) {
      long long a = (*r)[static_cast<size_t>(s)];
      long long b = (*best)[static_cast<size_t>(s)];
      if (a == b) continue;
      if (a < b) best = r;
      break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Counterexample materialization (concrete re-execution)
// ---------------------------------------------------------------------------

Counterexample materialize(const Spec& spec, const AnalysisTask& task,
                           const PreparedTask& prep, const PreparedGoal& pg,
                           const std::vector<long long>& env,
                           const DomainBounds& bounds) {
  Counterexample ce;
  ce.goal_label = pg.goal->label;

  Env general_env;
  for (size_t i = 0; i < prep.order.size(); ++i) {
    Value v = decode_raw(env[i], prep.order[i].sort, bounds);
    general_env.bind(prep.order[i].name, v);
    if (i < task.vars.size()) ce.args.emplace_back(prep.order[i].name, v);
  }

  size_t nfields = spec.state.fields.size();
  for (int c = 0; c < task.state_copies; ++c) {
    int source = (prep.aliased && c == 1) ? 0 : c;
    StateValue sv;
    for (size_t i = 0; i < nfields; ++i) {
      const std::string name = copy_tag(task, source) + "." + spec.state.fields[i].name;
      sv.push_back(*general_env.lookup(name));
    }
    ce.initial_states.push_back(std::move(sv));
  }

  // Concrete trace via exec_stmt.
  std::vector<StateValue> states = ce.initial_states;
  for (const TaskCall& call : task.program) {
    const OpDecl& op = *spec.find_op(call.op);
    Env call_env;
    for (size_t i = 0; i < op.params.size(); ++i)
      call_env.bind(op.params[i].name, *general_env.lookup(call.args[i]));
    EvalContext ctx;
    ctx.state = &spec.state;
    ctx.env = &call_env;
    ctx.bounds = bounds;
    StateValue& target = states[static_cast<size_t>(call.state)];
    target = exec_stmt(op.body, target, ctx);
    ce.trace.emplace_back(call.op + "@" + copy_tag(task, call.state), target);
  }

  // Counterexamples are self-validating: the goal must evaluate to false
  // under the recorded bindings (via the tree-walking evaluator, which is
  // independent of the compiled engine that found the assignment).
  EvalContext check_ctx;
  check_ctx.env = &general_env;
  check_ctx.bounds = bounds;
  if (eval_formula(pg.formula, check_ctx))
    throw std::logic_error("counterexample failed self-validation: " + ce.goal_label);

  return ce;
}

std::vector<long long> template_env(const PreparedTask& prep, const FastEval& ev,
                                    const DomainBounds& bounds) {
  std::vector<long long> env(static_cast<size_t>(ev.num_slots()), 0);
  for (size_t i = 0; i < prep.order.size(); ++i)
    env[i] = domain_for(prep.order[i].sort, bounds, prep.order[i].name).raw_at(0);
  return env;
}

int resolve_threads(const CheckConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

TaskResult check_task_fast(const Spec& spec, const AnalysisTask& task,
                           const DomainBounds& bounds, const CheckConfig& cfg) {
  PreparedTask prep = prepare_task(spec, task);
  FastEval ev(bounds, prep.order, prep.slot_of);

  std::vector<int> assumption_nodes;
  for (const auto& c : prep.assumption) assumption_nodes.push_back(ev.compile(c));

  struct GoalNode {
    int neg_node = -1;
  };
  std::vector<GoalNode> goal_nodes;
  for (const auto& pg : prep.goals) {
    GoalNode gn;
    if (!pg.trivially_true) gn.neg_node = ev.compile(Formula::negation(pg.formula));
    goal_nodes.push_back(gn);
  }

  int threads = resolve_threads(cfg);
  std::vector<long long> tmpl = template_env(prep, ev, bounds);

  TaskResult result;

  // Vacuity: does the assumption admit any model?
  SweepPlan model_plan = make_plan(ev, prep.order, bounds, assumption_nodes);
  bool any_model = sweep(ev, model_plan, tmpl, threads).has_value();
  result.vacuous = !any_model;

  std::optional<std::vector<long long>> first_env;
  size_t first_goal = 0;

  for (size_t gi = 0; gi < prep.goals.size(); ++gi) {
    const PreparedGoal& pg = prep.goals[gi];
    GoalResult gr;
    gr.label = pg.goal->label;
    gr.role = pg.goal->role;
    gr.subject_op = pg.goal->subject_op;

    if (!pg.trivially_true && any_model) {
      std::vector<int> tests = assumption_nodes;
      tests.push_back(goal_nodes[gi].neg_node);
      SweepPlan plan = make_plan(ev, prep.order, bounds, tests);
      if (auto env = sweep(ev, plan, tmpl, threads)) {
        gr.passed = false;
        gr.ce = materialize(spec, task, prep, pg, *env, bounds);
        result.passed = false;
        if (!first_env) {
          first_env = env;
          first_goal = gi;
        } else {
          for (size_t i = 0; i < prep.order.size(); ++i) {
            long long a = (*env)[i];
            long long b = (*first_env)[i];
            if (a == b) continue;
            if (a < b) {
              first_env = env;
              first_goal = gi;
            }
            break;
          }
        }
      }
    }
    result.goals.push_back(std::move(gr));
  }

  if (first_env)
    result.first_ce =
        materialize(spec, task, prep, prep.goals[first_goal], *first_env, bounds);
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reference implementation
// ---------------------------------------------------------------------------

TaskResult check_task_reference(const Spec& spec, const AnalysisTask& task,
                                const DomainBounds& bounds) {
  if (!bounds.valid())
    throw ConfigError("invalid bounds: interval size exceeds the cap of " +
                      std::to_string(bounds.cap));

  size_t nfields = spec.state.fields.size();

  // Assignment space: argument variables, then each copy's fields.
  std::vector<Sort> sorts;
  for (const auto& v : task.vars) sorts.push_back(v.sort);
  for (int c = 0; c < task.state_copies; ++c)
    for (const auto& fd : spec.state.fields) sorts.push_back(fd.sort);

  std::vector<std::vector<Value>> domains;
  long long total = 1;
  for (const auto& s : sorts) {
    domains.push_back(enumerate_sort_values(s, bounds));
    total *= static_cast<long long>(domains.back().size());
    if (total > (1LL << 34))
      throw ConfigError("reference checker: assignment space too large");
  }

  TaskResult result;
  for (const ProofGoal& g : task.goals) {
    GoalResult gr;
    gr.label = g.label;
    gr.role = g.role;
    gr.subject_op = g.subject_op;
    result.goals.push_back(std::move(gr));
  }

  bool any_model = false;
  std::vector<size_t> idx(sorts.size(), 0);
  std::vector<Value> current(sorts.size());

  auto run_assignment = [&]() {
    Env env;
    for (size_t i = 0; i < task.vars.size(); ++i)
      env.bind(task.vars[i].name, current[i]);

    std::vector<StateValue> init(static_cast<size_t>(task.state_copies));
    size_t pos = task.vars.size();
    for (int c = 0; c < task.state_copies; ++c)
      for (size_t i = 0; i < nfields; ++i) init[static_cast<size_t>(c)].push_back(current[pos++]);

    EvalContext ctx;
    ctx.state = &spec.state;
    ctx.env = &env;
    ctx.bounds = bounds;
    ctx.copies = &init;
    if (!eval_formula(task.assumption, ctx)) return;
    any_model = true;

    // timeline[t] = state copies after t calls.
    std::vector<std::vector<StateValue>> timeline{init};
    for (const TaskCall& call : task.program) {
      const OpDecl& op = *spec.find_op(call.op);
      Env call_env;
      for (size_t i = 0; i < op.params.size(); ++i)
        call_env.bind(op.params[i].name, *env.lookup(call.args[i]));
      EvalContext cctx;
      cctx.state = &spec.state;
      cctx.env = &call_env;
      cctx.bounds = bounds;
      std::vector<StateValue> next = timeline.back();
      next[static_cast<size_t>(call.state)] =
          exec_stmt(op.body, next[static_cast<size_t>(call.state)], cctx);
      timeline.push_back(std::move(next));
    }

    for (size_t gi = 0; gi < task.goals.size(); ++gi) {
      GoalResult& gr = result.goals[gi];
      if (!gr.passed) continue;  // already have the first counterexample
      const ProofGoal& g = task.goals[gi];
      EvalContext gctx;
      gctx.state = &spec.state;
      gctx.env = &env;
      gctx.bounds = bounds;
      gctx.copies = &timeline[static_cast<size_t>(g.eval_after)];
      if (g.old_at >= 0) gctx.old_copies = &timeline[static_cast<size_t>(g.old_at)];
      if (eval_formula(g.formula, gctx)) continue;

      gr.passed = false;
      result.passed = false;
      Counterexample ce;
      ce.goal_label = g.label;
      for (size_t i = 0; i < task.vars.size(); ++i)
        ce.args.emplace_back(task.vars[i].name, current[i]);
      ce.initial_states = init;
      for (size_t t = 0; t < task.program.size(); ++t)
        ce.trace.emplace_back(
            task.program[t].op + "@" +
                (task.state_copies == 1
                     ? "state"
                     : "state" + std::to_string(task.program[t].state + 1)),
            timeline[t + 1][static_cast<size_t>(task.program[t].state)]);
      gr.ce = std::move(ce);
      if (!result.first_ce) result.first_ce = gr.ce;
    }
  };

  // Odometer enumeration in lexicographic order.
  for (;;) {
    for (size_t i = 0; i < sorts.size(); ++i) current[i] = domains[i][idx[i]];
    run_assignment();
    size_t d = sorts.size();
    while (d > 0) {
      --d;
      if (++idx[d] < domains[d].size()) break;
      idx[d] = 0;
      if (d == 0) {
        result.vacuous = !any_model;
        return result;
      }
    }
    if (sorts.empty()) break;
  }
  result.vacuous = !any_model;
  return result;
}

TaskResult check_task(const Spec& spec, const AnalysisTask& task,
                      const DomainBounds& bounds, const CheckConfig& cfg) {
  if (!bounds.valid())
    throw ConfigError("invalid bounds: interval size " + std::to_string(bounds.size()) +
                      " exceeds the cap of " + std::to_string(bounds.cap));
  try {
    return check_task_fast(spec, task, bounds, cfg);
  } catch (const FastUnsupported&) {
    return check_task_reference(spec, task, bounds);
  }
}

ValidityResult check_formula_valid(const Spec& spec, const FormulaPtr& f,
                                   const std::vector<TaskVar>& symbolic_consts,
                                   const DomainBounds& bounds, const CheckConfig& cfg) {
  AnalysisTask task;
  task.kind = TaskKind::Safety;
  task.name = "validity";
  task.vars = symbolic_consts;
  task.state_copies = 1;
  task.assumption = Formula::bool_lit(true);
  ProofGoal goal;
  goal.label = "formula valid";
  goal.role = GoalRole::SafetyInvariant;
  goal.formula = f;
  goal.eval_after = 0;
  task.goals.push_back(goal);

  TaskResult r = check_task(spec, task, bounds, cfg);
  ValidityResult out;
  out.valid = r.passed;
  if (!r.goals.empty() && r.goals[0].ce) out.ce = r.goals[0].ce;
  return out;
}

}  // namespace cise
