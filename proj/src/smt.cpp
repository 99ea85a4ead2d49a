#include "smt.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cise {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
      out += c;
    else
      out += '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "s_" + out;
  return out;
}

// Collision-free SMT symbols for DSL identifiers.
class SymbolTable {
 public:
  std::string intern(const std::string& dsl_name) {
    auto it = by_name_.find(dsl_name);
    if (it != by_name_.end()) return it->second;
    std::string base = sanitize(dsl_name);
    std::string sym = base;
    int n = 0;
    while (taken_.count(sym)) sym = base + "_" + std::to_string(n++);
    taken_.insert(sym);
    by_name_[dsl_name] = sym;
    return sym;
  }

 private:
  std::map<std::string, std::string> by_name_;
  std::set<std::string> taken_;
};

std::string smt_sort(const Sort& s, bool as_binder) {
  switch (s.kind()) {
    case SortKind::Int:
      return "Int";
    case SortKind::Bool:
      return "Bool";
    case SortKind::Pair:
      return "IntPair";
    case SortKind::Set:
      // Set-sorted quantifier binders become arrays; set constants elsewhere
      // are characteristic functions and never reach this as a flat sort.
      return as_binder ? "(Array " + smt_sort(s.elem(), false) + " Bool)" : "SetFun";
  }
  return "Int";
}

struct Emitter {
  const Spec& spec;
  const AnalysisTask& task;
  SymbolTable symbols;
  std::ostringstream decls;
  std::ostringstream asserts;
  bool uses_pairs = false;

  // (copy, field index) -> current SSA symbol
  std::map<std::pair<int, int>, std::string> field_sym;
  // binder name -> (symbol, sort, is_set)
  std::vector<std::tuple<std::string, std::string, Sort>> binders;

  explicit Emitter(const Spec& s, const AnalysisTask& t) : spec(s), task(t) {}

  std::string copy_tag(int copy) const {
    return task.state_copies == 1 ? "state" : "state" + std::to_string(copy + 1);
  }

  const Sort& field_sort(int field_idx) const {
    return spec.state.fields[static_cast<size_t>(field_idx)].sort;
  }

  void declare_field(int copy, int field_idx, int time) {
    std::string name = copy_tag(copy) + "." +
                       spec.state.fields[static_cast<size_t>(field_idx)].name + "@t" +
                       std::to_string(time);
    std::string sym = symbols.intern(name);
    const Sort& s = field_sort(field_idx);
    if (s.is_set()) {
      decls << "(declare-fun " << sym << " (" << smt_sort(s.elem(), false)
            << ") Bool)\n";
      if (s.elem().is_pair()) uses_pairs = true;
    } else {
      decls << "(declare-const " << sym << " " << smt_sort(s, false) << ")\n";
      if (s.is_pair()) uses_pairs = true;
    }
    field_sym[{copy, field_idx}] = sym;
  }

  void declare_var(const TaskVar& v) {
    std::string sym = symbols.intern(v.name);
    if (v.sort.is_set()) {
      decls << "(declare-fun " << sym << " (" << smt_sort(v.sort.elem(), false)
            << ") Bool)\n";
      if (v.sort.elem().is_pair()) uses_pairs = true;
    } else {
      decls << "(declare-const " << sym << " " << smt_sort(v.sort, false) << ")\n";
      if (v.sort.is_pair()) uses_pairs = true;
    }
  }

  // ---- sort inference over task formulas ----

  Sort expr_sort(const ExprPtr& ep) {
    const Expr& e = *ep;
    switch (e.kind) {
      case ExprKind::IntLit:
        return Sort::integer();
      case ExprKind::Var: {
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
          if (std::get<0>(*it) == e.name) return std::get<2>(*it);
        for (const auto& v : task.vars)
          if (v.name == e.name) return v.sort;
        if (e.sort) return *e.sort;
        throw std::logic_error("smt: unknown variable " + e.name);
      }
      case ExprKind::FieldRead: {
        int idx = spec.state.field_index(e.name);
        return field_sort(idx);
      }
      case ExprKind::MkPair:
        return Sort::pair(expr_sort(e.a), expr_sort(e.b));
      case ExprKind::Fst:
        return expr_sort(e.a).first();
      case ExprKind::Snd:
        return expr_sort(e.a).second();
      case ExprKind::EmptySet:
        return Sort::set(e.elem_sort ? *e.elem_sort : Sort::integer());
      case ExprKind::SetAdd:
      case ExprKind::SetRemove:
        return expr_sort(e.b);
      case ExprKind::AddInt:
      case ExprKind::SubInt:
        return Sort::integer();
    }
    return Sort::integer();
  }

  // ---- scalar expression translation ----

  std::string scalar(const ExprPtr& ep,
                     const std::map<std::pair<int, int>, std::string>& old_sym) {
    const Expr& e = *ep;
    switch (e.kind) {
      case ExprKind::IntLit:
        return e.int_value < 0 ? "(- " + std::to_string(-e.int_value) + ")"
                               : std::to_string(e.int_value);
      case ExprKind::Var: {
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
          if (std::get<0>(*it) == e.name) return std::get<1>(*it);
        return symbols.intern(e.name);
      }
      case ExprKind::FieldRead:
        return field_symbol(e, old_sym);
      case ExprKind::MkPair:
        uses_pairs = true;
        return "(mk-pair " + scalar(e.a, old_sym) + " " + scalar(e.b, old_sym) + ")";
      case ExprKind::Fst:
        return "(pfirst " + scalar(e.a, old_sym) + ")";
      case ExprKind::Snd:
        return "(psecond " + scalar(e.a, old_sym) + ")";
      case ExprKind::AddInt:
        return "(+ " + scalar(e.a, old_sym) + " " + scalar(e.b, old_sym) + ")";
      case ExprKind::SubInt:
        return "(- " + scalar(e.a, old_sym) + " " + scalar(e.b, old_sym) + ")";
      default:
        throw std::logic_error("smt: set expression in scalar position");
    }
  }

  std::string field_symbol(const Expr& e,
                           const std::map<std::pair<int, int>, std::string>& old_sym) {
    int idx = spec.state.field_index(e.name);
    const auto& table = e.scope == FieldScope::Old ? old_sym : field_sym;
    auto it = table.find({e.state_copy, idx});
    if (it == table.end()) throw std::logic_error("smt: unresolved field " + e.name);
    return it->second;
  }

  // Membership of `probe` (an SMT term) in a set-sorted expression,
  // translated pointwise.
  std::string member(const std::string& probe, const ExprPtr& set,
                     const std::map<std::pair<int, int>, std::string>& old_sym) {
    const Expr& e = *set;
    switch (e.kind) {
      case ExprKind::EmptySet:
        return "false";
      case ExprKind::SetAdd:
        return "(or (= " + probe + " " + scalar(e.a, old_sym) + ") " +
               member(probe, e.b, old_sym) + ")";
      case ExprKind::SetRemove:
        return "(and (not (= " + probe + " " + scalar(e.a, old_sym) + ")) " +
               member(probe, e.b, old_sym) + ")";
      case ExprKind::FieldRead:
        return "(" + field_symbol(e, old_sym) + " " + probe + ")";
      case ExprKind::Var: {
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
          if (std::get<0>(*it) == e.name)
            return "(select " + std::get<1>(*it) + " " + probe + ")";
        return "(" + symbols.intern(e.name) + " " + probe + ")";
      }
      default:
        throw std::logic_error("smt: unsupported set expression");
    }
  }

  std::string fresh_bound(const std::string& hint) {
    return symbols.intern("bound." + hint + "." + std::to_string(bound_counter_++));
  }

  std::string set_extensional(const char* connective, const ExprPtr& a,
                              const ExprPtr& b,
                              const std::map<std::pair<int, int>, std::string>& old_sym) {
    Sort elem = expr_sort(a).elem();
    std::string x = fresh_bound("x");
    std::string sort_txt = smt_sort(elem, false);
    if (elem.is_pair()) uses_pairs = true;
    return "(forall ((" + x + " " + sort_txt + ")) (" + connective + " " +
           member(x, a, old_sym) + " " + member(x, b, old_sym) + "))";
  }

  std::string formula(const FormulaPtr& fp,
                      const std::map<std::pair<int, int>, std::string>& old_sym) {
    const Formula& f = *fp;
    switch (f.kind) {
      case FormulaKind::BoolLit:
        return f.bool_value ? "true" : "false";
      case FormulaKind::Cmp: {
        Sort s = expr_sort(f.e1);
        if (s.is_set()) {
          std::string eq = set_extensional("=", f.e1, f.e2, old_sym);
          return f.cmp == CmpOp::Eq ? eq : "(not " + eq + ")";
        }
        std::string a = scalar(f.e1, old_sym);
        std::string b = scalar(f.e2, old_sym);
        switch (f.cmp) {
          case CmpOp::Eq:
            return "(= " + a + " " + b + ")";
          case CmpOp::Ne:
            return "(not (= " + a + " " + b + "))";
          case CmpOp::Lt:
            return "(< " + a + " " + b + ")";
          case CmpOp::Le:
            return "(<= " + a + " " + b + ")";
          case CmpOp::Gt:
            return "(> " + a + " " + b + ")";
          case CmpOp::Ge:
            return "(>= " + a + " " + b + ")";
        }
        return "false";
      }
      case FormulaKind::Mem:
        return member(scalar(f.e1, old_sym), f.e2, old_sym);
      case FormulaKind::IsEmpty: {
        Sort elem = expr_sort(f.e1).elem();
        std::string x = fresh_bound("x");
        if (elem.is_pair()) uses_pairs = true;
        return "(forall ((" + x + " " + smt_sort(elem, false) + ")) (not " +
               member(x, f.e1, old_sym) + "))";
      }
      case FormulaKind::SetEq:
        return set_extensional("=", f.e1, f.e2, old_sym);
      case FormulaKind::BoolAtom:
        return scalar(f.e1, old_sym);
      case FormulaKind::Not:
        return "(not " + formula(f.f1, old_sym) + ")";
      case FormulaKind::And:
        return "(and " + formula(f.f1, old_sym) + " " + formula(f.f2, old_sym) + ")";
      case FormulaKind::Or:
        return "(or " + formula(f.f1, old_sym) + " " + formula(f.f2, old_sym) + ")";
      case FormulaKind::Implies:
        return "(=> " + formula(f.f1, old_sym) + " " + formula(f.f2, old_sym) + ")";
      case FormulaKind::Iff:
        return "(= " + formula(f.f1, old_sym) + " " + formula(f.f2, old_sym) + ")";
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        const Sort& bs = *f.binder_sort;
        std::string sym = symbols.intern("q." + f.binder + "." +
                                         std::to_string(bound_counter_++));
        if (bs.is_pair() || (bs.is_set() && bs.elem().is_pair())) uses_pairs = true;
        binders.emplace_back(f.binder, sym, bs);
        std::string body = formula(f.f1, old_sym);
        binders.pop_back();
        std::string head = f.kind == FormulaKind::Forall ? "forall" : "exists";
        return "(" + head + " ((" + sym + " " + smt_sort(bs, true) + ")) " + body + ")";
      }
    }
    return "false";
  }

  // Applies one call as an SSA transition.
  void transition(const TaskCall& call, int time) {
    const OpDecl& op = *spec.find_op(call.op);

    // Bodies reference parameters by name; map them to the instance symbols.
    std::map<std::string, std::string> param_to_instance;
    for (size_t i = 0; i < op.params.size(); ++i)
      param_to_instance[op.params[i].name] = call.args[i];

    // Linearize the body.
    std::vector<const Stmt*> linear;
    std::vector<const Stmt*> stack;
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

    int step = 0;
    for (const Stmt* st : linear) {
      if (st->kind != StmtKind::Assign) continue;
      ++step;
      int idx = spec.state.field_index(st->field);
      const Sort& fs = field_sort(idx);

      // Rewrite the assigned expression: parameters -> instance vars, fields
      // -> the call's copy at the current SSA time.
      ExprPtr value = retag_expr(st->value, call.state, param_to_instance);

      std::string name = copy_tag(call.state) + "." + st->field + "@t" +
                         std::to_string(time + 1) + (step > 1 ? "." + std::to_string(step) : "");
      std::string sym = symbols.intern(name);
      if (fs.is_set()) {
        decls << "(declare-fun " << sym << " (" << smt_sort(fs.elem(), false)
              << ") Bool)\n";
        std::string x = fresh_bound("x");
        asserts << "(assert (forall ((" << x << " " << smt_sort(fs.elem(), false)
                << ")) (= (" << sym << " " << x << ") " << member(x, value, field_sym)
                << ")))\n";
      } else {
        decls << "(declare-const " << sym << " " << smt_sort(fs, false) << ")\n";
        asserts << "(assert (= " << sym << " " << scalar(value, field_sym) << "))\n";
      }
      field_sym[{call.state, idx}] = sym;
    }
  }

  // Parameters substituted by instance variables; field reads tagged with the
  // call's state copy so they resolve through the SSA table.
  ExprPtr retag_expr(const ExprPtr& e, int copy,
                     const std::map<std::string, std::string>& params) {
    ExprPtr out = std::make_shared<Expr>(*e);
    if (e->a) out->a = retag_expr(e->a, copy, params);
    if (e->b) out->b = retag_expr(e->b, copy, params);
    if (out->kind == ExprKind::Var) {
      auto it = params.find(out->name);
      if (it != params.end()) out->name = it->second;
    } else if (out->kind == ExprKind::FieldRead) {
      out->state_copy = copy;
    }
    return out;
  }

  int bound_counter_ = 0;
};

}  // namespace

std::vector<SmtScript> emit_task(const Spec& spec, const AnalysisTask& task) {
  std::vector<SmtScript> scripts;

  for (size_t gi = 0; gi < task.goals.size(); ++gi) {
    const ProofGoal& goal = task.goals[gi];
    Emitter em(spec, task);

    for (const TaskVar& v : task.vars) em.declare_var(v);
    for (int c = 0; c < task.state_copies; ++c)
      for (size_t i = 0; i < spec.state.fields.size(); ++i)
        em.declare_field(c, static_cast<int>(i), 0);

    std::string assumption = em.formula(task.assumption, em.field_sym);

    std::map<std::pair<int, int>, std::string> old_sym;
    for (int t = 0; t < goal.eval_after; ++t) {
      if (t == goal.old_at) old_sym = em.field_sym;
      em.transition(task.program[static_cast<size_t>(t)], t);
    }
    if (goal.old_at >= 0 && goal.old_at >= goal.eval_after) old_sym = em.field_sym;
    if (old_sym.empty()) old_sym = em.field_sym;

    std::string goal_txt = em.formula(goal.formula, old_sym);

    std::ostringstream os;
    os << "; task: " << task.name << "\n";
    os << "; goal: " << goal.label << "\n";
    os << "; unsat = goal is valid; sat = counterexample exists\n";
    os << "(set-logic ALL)\n";
    if (em.uses_pairs)
      os << "(declare-datatype IntPair ((mk-pair (pfirst Int) (psecond Int))))\n";
    os << em.decls.str();
    os << "(assert " << assumption << ")\n";
    os << em.asserts.str();
    os << "(assert (not " << goal_txt << "))\n";
    os << "(check-sat)\n";
    os << "(get-model)\n";

    SmtScript script;
    script.task_name = task.name;
    script.goal_label = goal.label;
    script.filename = sanitize(task.name) + "_goal" + std::to_string(gi + 1) + ".smt2";
    script.text = os.str();
    scripts.push_back(std::move(script));
  }
  return scripts;
}

std::vector<std::string> emit_to_directory(const Spec& spec,
                                           const std::vector<AnalysisTask>& tasks,
                                           const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const AnalysisTask& task : tasks) {
    for (const SmtScript& s : emit_task(spec, task)) {
      std::filesystem::path path = std::filesystem::path(dir) / s.filename;
      std::ofstream out(path);
      out << s.text;
      files.push_back(path.string());
    }
  }
  return files;
}

SolverVerdict run_solver(const std::string& command, const std::string& script_text) {
  SolverVerdict v;

  std::string path;
  {
    char tmpl[] = "/tmp/cise_smt_XXXXXX";
    int fd = mkstemp(tmpl);
    if (fd < 0) {
      v.raw = "could not create temporary file";
      return v;
    }
    path = tmpl;
    FILE* f = fdopen(fd, "w");
    fwrite(script_text.data(), 1, script_text.size(), f);
    fclose(f);
  }

  std::string cmd = command + " " + path + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path.c_str());
    v.raw = "could not run solver command";
    return v;
  }
  std::string output;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) output += buf;
  pclose(pipe);
  std::remove(path.c_str());

  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "unsat") {
      v.kind = SolverVerdict::Unsat;
      v.raw = line;
      return v;
    }
    if (line == "sat") {
      v.kind = SolverVerdict::Sat;
      v.raw = line;
      return v;
    }
    if (line == "unknown") {
      v.kind = SolverVerdict::Unknown;
      v.raw = line;
      return v;
    }
  }
  v.kind = SolverVerdict::Error;
  v.raw = output.substr(0, 200);
  return v;
}

std::vector<AgreementRow> smt_agreement(const Spec& spec,
                                        const std::vector<AnalysisTask>& tasks,
                                        const DomainBounds& bounds,
                                        const std::string& solver_cmd,
                                        const CheckConfig& cfg) {
  std::vector<AgreementRow> rows;
  for (const AnalysisTask& task : tasks) {
    TaskResult checked = check_task(spec, task, bounds, cfg);
    std::vector<SmtScript> scripts = emit_task(spec, task);
    for (size_t i = 0; i < scripts.size(); ++i) {
      AgreementRow row;
      row.task = task.name;
      row.goal = scripts[i].goal_label;
      row.checker_passed = checked.goals[i].passed;
      row.solver = run_solver(solver_cmd, scripts[i].text).kind;
      row.agree = (row.solver == SolverVerdict::Unsat && row.checker_passed) ||
                  (row.solver == SolverVerdict::Sat && !row.checker_passed);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace cise
