#include "analysis.hpp"

#include <algorithm>

#include "subst.hpp"

namespace cise {

namespace {

FormulaPtr tag_copy(const FormulaPtr& f, int copy) {
  return retag_fields(f, [copy](Expr& e) { e.state_copy = copy; });
}

// Sort-directed disequality between two instance variables; pairs compare
// component-wise.
FormulaPtr var_diseq(const std::string& a, const std::string& b, const Sort& sort) {
  ExprPtr va = Expr::var(a);
  ExprPtr vb = Expr::var(b);
  va->sort = sort;
  vb->sort = sort;
  switch (sort.kind()) {
    case SortKind::Int:
    case SortKind::Bool:
      return Formula::compare(CmpOp::Ne, va, vb);
    case SortKind::Pair:
      return Formula::disj(
          Formula::compare(CmpOp::Ne, Expr::fst(va), Expr::fst(vb)),
          Formula::compare(CmpOp::Ne, Expr::snd(va), Expr::snd(vb)));
    case SortKind::Set:
      return Formula::negation(Formula::set_eq(va, vb));
  }
  return Formula::bool_lit(false);
}

// Instance variables for an operation's parameters, suffixed and kept
// collision-free against every spec identifier.
std::vector<std::string> instance_names(const OpDecl& op, const std::string& suffix,
                                        FreshNames& fresh) {
  std::vector<std::string> out;
  out.reserve(op.params.size());
  for (const auto& p : op.params) out.push_back(fresh.fresh(p.name + suffix));
  return out;
}

void append_vars(std::vector<TaskVar>& vars, const OpDecl& op,
                 const std::vector<std::string>& names) {
  for (size_t i = 0; i < op.params.size(); ++i)
    vars.push_back({names[i], op.params[i].sort});
}

FormulaPtr conj_requires(const Spec&, const OpDecl& op,
                         const std::vector<std::string>& args, int copy) {
  std::vector<FormulaPtr> parts;
  for (const auto& r : op.requires_clauses)
    parts.push_back(instantiate_clause(r, op, args, copy));
  return Formula::conj_all(parts);
}

// At least one argument differs between the two instance vectors; null when
// the operation has no parameters.
FormulaPtr distinct_invocation(const OpDecl& op, const std::vector<std::string>& a1,
                               const std::vector<std::string>& a2) {
  FormulaPtr acc;
  for (size_t i = 0; i < op.params.size(); ++i) {
    FormulaPtr d = var_diseq(a1[i], a2[i], op.params[i].sort);
    acc = acc ? Formula::disj(acc, d) : d;
  }
  return acc;
}

const Sort* param_sort(const OpDecl& op, const std::string& arg) {
  for (const auto& p : op.params)
    if (p.name == arg) return &p.sort;
  return nullptr;
}

}  // namespace

FormulaPtr instantiate_clause(const FormulaPtr& clause, const OpDecl& op,
                              const std::vector<std::string>& arg_names, int copy) {
  Substitution s;
  for (size_t i = 0; i < op.params.size(); ++i) {
    ExprPtr v = Expr::var(arg_names[i]);
    v->sort = op.params[i].sort;
    s.map_var(op.params[i].name, v);
  }
  FreshNames fresh(free_vars(clause));
  FormulaPtr inst = substitute(clause, s, &fresh);
  return tag_copy(inst, copy);
}

FormulaPtr default_state_eq(const Spec& spec) {
  std::vector<FormulaPtr> parts;
  for (const auto& fd : spec.state.fields) {
    ExprPtr l = Expr::field(fd.name, FieldScope::Left);
    ExprPtr r = Expr::field(fd.name, FieldScope::Right);
    l->sort = fd.sort;
    r->sort = fd.sort;
    parts.push_back(fd.sort.is_set() ? Formula::set_eq(l, r)
                                     : Formula::compare(CmpOp::Eq, l, r));
  }
  return Formula::conj_all(parts);
}

FormulaPtr state_eq_schema(const Spec& spec) {
  if (spec.state_eq) return spec.state_eq->body;
  return default_state_eq(spec);
}

bool state_eq_is_pointwise(const Spec& spec) {
  FormulaPtr schema = state_eq_schema(spec);
  std::set<std::string> covered;

  // Walk the conjunction; every leaf must equate one field with itself
  // across the two sides.
  std::vector<FormulaPtr> stack{schema};
  while (!stack.empty()) {
    FormulaPtr f = stack.back();
    stack.pop_back();
    if (f->kind == FormulaKind::And) {
      stack.push_back(f->f1);
      stack.push_back(f->f2);
      continue;
    }
    if (f->kind == FormulaKind::BoolLit && f->bool_value) continue;
    bool eq_kind = f->kind == FormulaKind::SetEq ||
                   (f->kind == FormulaKind::Cmp && f->cmp == CmpOp::Eq);
    if (!eq_kind) return false;
    const Expr& a = *f->e1;
    const Expr& b = *f->e2;
    if (a.kind != ExprKind::FieldRead || b.kind != ExprKind::FieldRead) return false;
    if (a.name != b.name) return false;
    bool straight = a.scope == FieldScope::Left && b.scope == FieldScope::Right;
    bool swapped = a.scope == FieldScope::Right && b.scope == FieldScope::Left;
    if (!straight && !swapped) return false;
    covered.insert(a.name);
  }

  for (const auto& fd : spec.state.fields)
    if (!covered.count(fd.name)) return false;
  return true;
}

FormulaPtr instantiate_state_eq(const Spec& spec, int left_copy, int right_copy) {
  return retag_fields(state_eq_schema(spec), [&](Expr& e) {
    if (e.scope == FieldScope::Left) {
      e.scope = FieldScope::Current;
      e.state_copy = left_copy;
    } else if (e.scope == FieldScope::Right) {
      e.scope = FieldScope::Current;
      e.state_copy = right_copy;
    }
  });
}

AnalysisTask gen_safety(const Spec& spec, const OpDecl& op) {
  AnalysisTask task;
  task.kind = TaskKind::Safety;
  task.name = op.name + "_safety";
  task.op_f = op.name;
  task.state_copies = 1;

  std::vector<std::string> args;
  for (const auto& p : op.params) {
    args.push_back(p.name);
    task.vars.push_back({p.name, p.sort});
  }

  FormulaPtr inv = tag_copy(spec.state.invariant, 0);
  task.assumption = Formula::conj(inv, conj_requires(spec, op, args, 0));
  task.program.push_back({op.name, args, 0});

  int k = 0;
  for (const auto& q : op.ensures_clauses) {
    ++k;
    ProofGoal goal;
    goal.label = "post#" + std::to_string(k) + " of " + op.name;
    goal.role = GoalRole::SafetyEnsures;
    goal.formula = instantiate_clause(q, op, args, 0);
    goal.eval_after = 1;
    goal.old_at = 0;
    goal.subject_op = op.name;
    task.goals.push_back(std::move(goal));
  }
  {
    ProofGoal goal;
    goal.label = "invariant preserved after " + op.name;
    goal.role = GoalRole::SafetyInvariant;
    goal.formula = tag_copy(spec.state.invariant, 0);
    goal.eval_after = 1;
    goal.subject_op = op.name;
    task.goals.push_back(std::move(goal));
  }
  return task;
}

GenResult gen_pair(const Spec& spec, const OpDecl& f, const OpDecl& g,
                   const TokenSystem* tokens) {
  if (tokens && tokens->ops_conflict(f.name, g.name)) return {std::nullopt, true};

  AnalysisTask task;
  task.kind = TaskKind::PairCommutativity;
  task.name = f.name + "_" + g.name + "_commutativity";
  task.op_f = f.name;
  task.op_g = g.name;
  task.state_copies = 2;
  task.state_eq_pointwise = state_eq_is_pointwise(spec);

  FreshNames fresh(spec_identifiers(spec));
  std::vector<std::string> a1 = instance_names(f, "1", fresh);
  std::vector<std::string> a2 = instance_names(g, "2", fresh);
  append_vars(task.vars, f, a1);
  append_vars(task.vars, g, a2);

  FormulaPtr assumption =
      Formula::conj(conj_requires(spec, f, a1, 0), conj_requires(spec, g, a2, 1));
  if (tokens) {
    for (const auto& [arg_f, arg_g] : tokens->arg_conflicts(f.name, g.name)) {
      const Sort* sf = param_sort(f, arg_f);
      size_t if_ = 0, ig_ = 0;
      for (size_t i = 0; i < f.params.size(); ++i)
        if (f.params[i].name == arg_f) if_ = i;
      for (size_t i = 0; i < g.params.size(); ++i)
        if (g.params[i].name == arg_g) ig_ = i;
      assumption =
          Formula::conj(assumption, var_diseq(a1[if_], a2[ig_], *sf));
    }
  }
  assumption = Formula::conj(assumption, instantiate_state_eq(spec, 0, 1));
  task.assumption = assumption;

  // f;g over state 1, then g;f over state 2.
  task.program.push_back({f.name, a1, 0});
  task.program.push_back({g.name, a2, 0});
  task.program.push_back({g.name, a2, 1});
  task.program.push_back({f.name, a1, 1});

  int k = 0;
  for (const auto& r : g.requires_clauses) {
    ++k;
    ProofGoal goal;
    goal.label = "pre#" + std::to_string(k) + " of " + g.name + " after " + f.name;
    goal.role = GoalRole::PairPre;
    goal.formula = instantiate_clause(r, g, a2, 0);
    goal.eval_after = 1;
    goal.subject_op = g.name;
    task.goals.push_back(std::move(goal));
  }
  k = 0;
  for (const auto& r : f.requires_clauses) {
    ++k;
    ProofGoal goal;
    goal.label = "pre#" + std::to_string(k) + " of " + f.name + " after " + g.name;
    goal.role = GoalRole::PairPre;
    goal.formula = instantiate_clause(r, f, a1, 1);
    goal.eval_after = 3;
    goal.subject_op = f.name;
    task.goals.push_back(std::move(goal));
  }
  {
    ProofGoal goal;
    goal.label = "states equal after both orders";
    goal.role = GoalRole::FinalEquality;
    goal.formula = instantiate_state_eq(spec, 0, 1);
    goal.eval_after = 4;
    task.goals.push_back(std::move(goal));
  }
  for (size_t c = 0; c < task.program.size(); ++c) {
    const TaskCall& call = task.program[c];
    const OpDecl& op = *spec.find_op(call.op);
    int j = 0;
    for (const auto& q : op.ensures_clauses) {
      ++j;
      ProofGoal goal;
      goal.label = "post#" + std::to_string(j) + " of " + op.name + " (call " +
                   std::to_string(c + 1) + ")";
      goal.role = GoalRole::Conformance;
      goal.formula = instantiate_clause(q, op, call.args, call.state);
      goal.eval_after = static_cast<int>(c) + 1;
      goal.old_at = static_cast<int>(c);
      goal.subject_op = op.name;
      task.goals.push_back(std::move(goal));
    }
  }

  return {std::move(task), false};
}

GenResult gen_self(const Spec& spec, const OpDecl& f, const TokenSystem* tokens) {
  if (tokens && tokens->ops_conflict(f.name, f.name)) return {std::nullopt, true};

  AnalysisTask task;
  task.kind = TaskKind::SelfStability;
  task.name = f.name + "_stability";
  task.op_f = f.name;
  task.state_copies = 2;
  task.state_eq_pointwise = state_eq_is_pointwise(spec);

  FreshNames fresh(spec_identifiers(spec));
  std::vector<std::string> a1 = instance_names(f, "1", fresh);
  std::vector<std::string> a2 = instance_names(f, "2", fresh);
  append_vars(task.vars, f, a1);
  append_vars(task.vars, f, a2);

  FormulaPtr assumption =
      Formula::conj(conj_requires(spec, f, a1, 0), conj_requires(spec, f, a2, 1));
  // Two concurrent invocations are distinct requests: their argument tuples
  // differ. Identical duplicates are delivered once, not analyzed as a race.
  if (FormulaPtr d = distinct_invocation(f, a1, a2))
    assumption = Formula::conj(assumption, d);
  if (tokens) {
    for (const auto& [arg_a, arg_b] : tokens->arg_conflicts(f.name, f.name)) {
      size_t ia = 0, ib = 0;
      for (size_t i = 0; i < f.params.size(); ++i) {
        if (f.params[i].name == arg_a) ia = i;
        if (f.params[i].name == arg_b) ib = i;
      }
      assumption = Formula::conj(
          assumption, var_diseq(a1[ia], a2[ib], *param_sort(f, arg_a)));
    }
  }
  assumption = Formula::conj(assumption, instantiate_state_eq(spec, 0, 1));
  task.assumption = assumption;

  task.program.push_back({f.name, a1, 0});
  task.program.push_back({f.name, a2, 0});

  ProofGoal goal;
  goal.label = "pre of second " + f.name + " call";
  goal.role = GoalRole::SelfPre;
  goal.formula = conj_requires(spec, f, a2, 0);
  goal.eval_after = 1;
  goal.subject_op = f.name;
  task.goals.push_back(std::move(goal));

  return {std::move(task), false};
}

GeneratedTasks generate_all_tasks(const Spec& spec, const TokenSystem* tokens) {
  GeneratedTasks out;

  std::vector<const OpDecl*> ops;
  for (const auto& op : spec.ops) ops.push_back(&op);
  std::sort(ops.begin(), ops.end(),
            [](const OpDecl* a, const OpDecl* b) { return a->name < b->name; });

  for (const OpDecl* op : ops) out.tasks.push_back(gen_safety(spec, *op));
  for (size_t i = 0; i < ops.size(); ++i) {
    for (size_t j = i + 1; j < ops.size(); ++j) {
      GenResult r = gen_pair(spec, *ops[i], *ops[j], tokens);
      if (r.skipped)
        out.skipped_pairs.emplace_back(ops[i]->name, ops[j]->name);
      else
        out.tasks.push_back(std::move(*r.task));
    }
  }
  for (const OpDecl* op : ops) {
    GenResult r = gen_self(spec, *op, tokens);
    if (r.skipped)
      out.skipped_self.push_back(op->name);
    else
      out.tasks.push_back(std::move(*r.task));
  }
  return out;
}

}  // namespace cise
