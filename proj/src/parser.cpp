#include "parser.hpp"

#include <set>

#include "lexer.hpp"

namespace cise {

namespace {

const char* kRwAdd = "remove_wins_add";
const char* kRwRemoves = "remove_wins_removes";

const std::set<std::string> kReserved = {
    "type",   "invariant", "let",    "ghost", "predicate", "mutable",
    "requires", "ensures", "forall", "exists", "not",      "mem",
    "add",    "remove",    "empty",  "is_empty", "fst",    "snd",
    "old",    "true",      "false",  "skip",  "in_set",    "equal",
    "int",    "bool",      "fset",   "unit",  "remove_wins_set"};

struct ParseError {
  SourceSpan span;
  std::string message;
  bool recoverable;  // backtracking may catch purely syntactic failures
};

[[noreturn]] void fail(SourceSpan sp, const std::string& msg, bool recoverable = true) {
  throw ParseError{std::move(sp), msg, recoverable};
}

// Name-resolution context for formulas, expressions, and bodies.
struct Names {
  const StateDecl* state = nullptr;
  // state-valued parameters in scope, each mapped to the scope its reads get
  std::vector<std::pair<std::string, FieldScope>> state_params;
  std::vector<std::string> params;
  std::vector<std::string> binders;
  bool bare_fields = false;  // invariant scope: fields referenced without a prefix
  bool allow_old = false;

  bool is_binder(const std::string& n) const {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      if (*it == n) return true;
    return false;
  }
  bool is_param(const std::string& n) const {
    for (const auto& p : params)
      if (p == n) return true;
    return false;
  }
  const FieldScope* state_param_scope(const std::string& n) const {
    for (const auto& sp : state_params)
      if (sp.first == n) return &sp.second;
    return nullptr;
  }
};

class Parser {
 public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Spec parse_spec_body(const std::string& filename) {
    Spec spec;
    spec.source_file = filename;
    bool have_state = false;
    std::vector<FormulaPtr> pending_invariants;

    // The state type must be known before operations are parsed, so scan
    // declarations in order and require the [@state] type to come first.
    while (!at(Tok::End)) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t.span, "expected a declaration", false);

      if (t.text == "type") {
        if (have_state)
          fail(t.span, "multiple [@state] types declared", false);
        parse_state_type(spec);
        have_state = true;
      } else if (t.text == "let") {
        if (!have_state) fail(t.span, "no [@state] type declared", false);
        spec.ops.push_back(parse_op(spec));
      } else if (t.text == "predicate") {
        if (!have_state) fail(t.span, "no [@state] type declared", false);
        if (spec.state_eq)
          fail(t.span, "multiple [@state_eq] predicates declared", false);
        spec.state_eq = parse_state_eq(spec);
      } else {
        fail(t.span, "expected 'type', 'let', or 'predicate', got '" + t.text + "'",
             false);
      }
    }

    if (!have_state) fail(peek().span, "no [@state] type declared", false);
    return spec;
  }

  FormulaPtr parse_standalone_formula(Names names) {
    names_ = std::move(names);
    FormulaPtr f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  // ---- token plumbing ----

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(peek().span, "expected " + what + ", got '" + peek().text + "'");
    return take();
  }
  const Token& expect_kw(const char* kw) {
    if (!at_ident(kw))
      fail(peek().span, std::string("expected '") + kw + "', got '" + peek().text + "'");
    return take();
  }
  bool eat(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  bool eat_kw(const char* kw) {
    if (!at_ident(kw)) return false;
    take();
    return true;
  }

  // ---- sorts ----

  Sort parse_sort() {
    const Token& t = peek();
    if (eat_kw("int")) return Sort::integer();
    if (eat_kw("bool")) return Sort::boolean();
    if (eat_kw("fset")) return Sort::set(parse_sort());
    if (eat(Tok::LParen)) {
      Sort a = parse_sort();
      expect(Tok::Comma, "','");
      Sort b = parse_sort();
      expect(Tok::RParen, "')'");
      return Sort::pair(a, b);
    }
    fail(t.span, "expected a sort, got '" + t.text + "'");
  }

  // ---- state type ----

  std::optional<std::string> parse_attr() {
    if (!at(Tok::LBracket)) return std::nullopt;
    take();
    expect(Tok::At, "'@'");
    const Token& name = expect(Tok::Ident, "attribute name");
    expect(Tok::RBracket, "']'");
    return name.text;
  }

  void parse_state_type(Spec& spec) {
    expect_kw("type");
    const Token& name = expect(Tok::Ident, "type name");
    auto attr = parse_attr();
    if (!attr || *attr != "state")
      fail(name.span, "type declarations must carry the [@state] attribute", false);
    spec.state.type_name = name.text;
    spec.state.span = name.span;

    expect(Tok::Eq, "'='");
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      eat_kw("mutable");
      const Token& fname = expect(Tok::Ident, "field name");
      if (kReserved.count(fname.text))
        fail(fname.span, "'" + fname.text + "' is a reserved word");
      expect(Tok::Colon, "':'");
      if (at_ident("remove_wins_set")) {
        take();
        Sort elem = parse_sort();
        spec.state.rw_fields.push_back({fname.text, elem, fname.span});
        spec.state.fields.push_back(
            {fname.text + "." + kRwAdd, Sort::set(elem), fname.span});
        spec.state.fields.push_back(
            {fname.text + "." + kRwRemoves, Sort::set(elem), fname.span});
      } else {
        Sort s = parse_sort();
        spec.state.fields.push_back({fname.text, s, fname.span});
      }
      if (!eat(Tok::Semi) && !at(Tok::RBrace))
        fail(peek().span, "expected ';' or '}' after a field declaration");
    }
    take();  // }

    std::vector<FormulaPtr> invariants;
    while (at_ident("invariant")) {
      take();
      expect(Tok::LBrace, "'{'");
      Names names;
      names.state = &spec.state;
      names.bare_fields = true;
      names_ = names;
      invariants.push_back(formula());
      expect(Tok::RBrace, "'}'");
    }
    spec.state.invariant = Formula::conj_all(invariants);
  }

  // ---- operations ----

  OpDecl parse_op(const Spec& spec) {
    expect_kw("let");
    eat_kw("ghost");
    OpDecl op;
    const Token& name = expect(Tok::Ident, "operation name");
    if (kReserved.count(name.text))
      fail(name.span, "'" + name.text + "' is a reserved word");
    op.name = name.text;
    op.span = name.span;

    // Parameter groups: (a b : sort) ... (state : <state type>)
    while (at(Tok::LParen)) {
      take();
      std::vector<Token> group_names;
      while (at(Tok::Ident)) group_names.push_back(take());
      if (group_names.empty()) fail(peek().span, "expected parameter names");
      expect(Tok::Colon, "':'");
      if (at_ident(spec.state.type_name.c_str())) {
        take();
        if (group_names.size() != 1)
          fail(group_names[0].span, "exactly one state parameter is allowed");
        if (!op.state_param.empty())
          fail(group_names[0].span, "duplicate state parameter");
        op.state_param = group_names[0].text;
      } else {
        Sort s = parse_sort();
        for (const auto& g : group_names) {
          if (kReserved.count(g.text))
            fail(g.span, "'" + g.text + "' is a reserved word");
          op.params.push_back({g.text, s, g.span});
        }
      }
      expect(Tok::RParen, "')'");
    }
    if (op.state_param.empty())
      fail(op.span,
           "operation '" + op.name + "' has no state parameter of type '" +
               spec.state.type_name + "'",
           false);

    if (eat(Tok::Colon)) expect_kw("unit");

    Names names;
    names.state = &spec.state;
    names.state_params = {{op.state_param, FieldScope::Current}};
    for (const auto& p : op.params) names.params.push_back(p.name);

    while (at_ident("requires") || at_ident("ensures")) {
      bool is_req = peek().text == "requires";
      take();
      expect(Tok::LBrace, "'{'");
      names.allow_old = !is_req;
      names_ = names;
      FormulaPtr f = formula();
      expect(Tok::RBrace, "'}'");
      (is_req ? op.requires_clauses : op.ensures_clauses).push_back(f);
    }

    expect(Tok::Eq, "'='");
    names.allow_old = false;
    names_ = names;
    op.body = parse_body();
    return op;
  }

  StmtPtr parse_body() {
    StmtPtr stmt = parse_stmt();
    while (eat(Tok::Semi)) {
      StmtPtr next = parse_stmt();
      stmt = Stmt::seq(stmt, next, stmt->span);
    }
    return stmt;
  }

  StmtPtr parse_stmt() {
    if (at_ident("skip")) {
      const Token& t = take();
      return Stmt::skip(t.span);
    }
    const Token& first = expect(Tok::Ident, "a statement");
    const FieldScope* sc = names_.state_param_scope(first.text);
    if (!sc)
      fail(first.span,
           "assignment must target a field of the state parameter, got '" + first.text +
               "'",
           false);
    expect(Tok::Dot, "'.'");
    std::string field = parse_field_path(first.span);
    expect(Tok::Assign, "'<-'");
    ExprPtr rhs = expr();
    return Stmt::assign(field, rhs, first.span);
  }

  // Field path after "<stateparam>." — handles remove_wins_set components.
  std::string parse_field_path(const SourceSpan& sp) {
    const Token& f = expect(Tok::Ident, "field name");
    if (names_.state->rw_info(f.text)) {
      if (at(Tok::Dot) && peek(1).kind == Tok::Ident &&
          (peek(1).text == kRwAdd || peek(1).text == kRwRemoves)) {
        take();
        const Token& comp = take();
        return f.text + "." + comp.text;
      }
      fail(f.span, "field '" + f.text +
                       "' is a remove_wins_set; name a component "
                       "(.remove_wins_add / .remove_wins_removes) or use in_set/equal",
           false);
    }
    if (names_.state->field_index(f.text) < 0)
      fail(f.span, "unknown state field: " + f.text, false);
    (void)sp;
    return f.text;
  }

  // ---- state_eq predicate ----

  StateEqDecl parse_state_eq(const Spec& spec) {
    expect_kw("predicate");
    StateEqDecl eq;
    const Token& name = expect(Tok::Ident, "predicate name");
    eq.pred_name = name.text;
    eq.span = name.span;
    auto attr = parse_attr();
    if (!attr || *attr != "state_eq")
      fail(name.span, "predicate declarations must carry the [@state_eq] attribute",
           false);

    expect(Tok::LParen, "'('");
    const Token& p1 = expect(Tok::Ident, "parameter name");
    const Token& p2 = expect(Tok::Ident, "parameter name");
    expect(Tok::Colon, "':'");
    expect_kw(spec.state.type_name.c_str());
    expect(Tok::RParen, "')'");
    eq.left_param = p1.text;
    eq.right_param = p2.text;

    expect(Tok::Eq, "'='");
    Names names;
    names.state = &spec.state;
    names.state_params = {{eq.left_param, FieldScope::Left},
                          {eq.right_param, FieldScope::Right}};
    names_ = names;
    eq.body = formula();
    return eq;
  }

  // ---- formulas ----

  FormulaPtr formula() { return formula_iff(); }

  FormulaPtr formula_iff() {
    FormulaPtr f = formula_implies();
    while (at(Tok::Iff)) {
      SourceSpan sp = take().span;
      FormulaPtr g = formula_implies();
      f = Formula::iff(f, g, sp);
    }
    return f;
  }

  FormulaPtr formula_implies() {
    FormulaPtr f = formula_or();
    if (at(Tok::Arrow)) {
      SourceSpan sp = take().span;
      FormulaPtr g = formula_implies();  // right-associative
      return Formula::implies(f, g, sp);
    }
    return f;
  }

  FormulaPtr formula_or() {
    FormulaPtr f = formula_and();
    while (at(Tok::PipePipe)) {
      SourceSpan sp = take().span;
      f = Formula::disj(f, formula_and(), sp);
    }
    return f;
  }

  FormulaPtr formula_and() {
    FormulaPtr f = formula_not();
    while (at(Tok::AmpAmp)) {
      SourceSpan sp = take().span;
      f = Formula::conj(f, formula_not(), sp);
    }
    return f;
  }

  FormulaPtr formula_not() {
    if (at_ident("not")) {
      SourceSpan sp = take().span;
      return Formula::negation(formula_not(), sp);
    }
    return formula_atom();
  }

  FormulaPtr formula_atom() {
    const Token& t = peek();

    if (at_ident("true")) {
      take();
      return Formula::bool_lit(true, t.span);
    }
    if (at_ident("false")) {
      take();
      return Formula::bool_lit(false, t.span);
    }
    if (at_ident("forall") || at_ident("exists")) return quantifier();

    if (at_ident("mem")) {
      take();
      auto [a, b] = two_args();
      return Formula::mem(a, b, t.span);
    }
    if (at_ident("is_empty")) {
      take();
      ExprPtr s = one_arg();
      return Formula::is_empty(s, t.span);
    }
    if (at_ident("in_set")) {
      take();
      auto [e, rw] = in_set_args();
      return desugar_in_set(e, rw, t.span);
    }
    if (at_ident("equal")) {
      take();
      return desugar_equal(t.span);
    }

    // Expression-led atom (comparison, ==, or a bool atom), falling back to a
    // parenthesized formula when the expression parse fails syntactically.
    size_t save = pos_;
    try {
      ExprPtr e1 = expr();
      if (at(Tok::Eq) || at(Tok::Ne) || at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) ||
          at(Tok::Ge)) {
        const Token& op = take();
        ExprPtr e2 = expr();
        CmpOp c = op.kind == Tok::Eq   ? CmpOp::Eq
                  : op.kind == Tok::Ne ? CmpOp::Ne
                  : op.kind == Tok::Lt ? CmpOp::Lt
                  : op.kind == Tok::Le ? CmpOp::Le
                  : op.kind == Tok::Gt ? CmpOp::Gt
                                       : CmpOp::Ge;
        return Formula::compare(c, e1, e2, op.span);
      }
      if (at(Tok::EqEq)) {
        const Token& op = take();
        ExprPtr e2 = expr();
        return Formula::set_eq(e1, e2, op.span);
      }
      return Formula::bool_atom(e1, e1->span);
    } catch (const ParseError& e) {
      if (!e.recoverable) throw;
      pos_ = save;
    }

    expect(Tok::LParen, "a formula");
    FormulaPtr f = formula();
    expect(Tok::RParen, "')'");
    return f;
  }

  FormulaPtr quantifier() {
    const Token& q = take();
    bool is_forall = q.text == "forall";

    std::vector<Token> vars;
    vars.push_back(expect(Tok::Ident, "quantified variable"));
    while (at(Tok::Comma) || at(Tok::Ident)) {
      if (at(Tok::Comma)) take();
      vars.push_back(expect(Tok::Ident, "quantified variable"));
    }
    std::optional<Sort> sort;
    if (eat(Tok::Colon)) sort = parse_sort();
    expect(Tok::Dot, "'.'");

    for (const auto& v : vars) {
      if (kReserved.count(v.text)) fail(v.span, "'" + v.text + "' is a reserved word");
      names_.binders.push_back(v.text);
    }
    FormulaPtr body = formula();
    for (size_t i = 0; i < vars.size(); ++i) names_.binders.pop_back();

    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = is_forall ? Formula::forall(it->text, sort, body, it->span)
                       : Formula::exists(it->text, sort, body, it->span);
    }
    return body;
  }

  // ---- expressions ----

  ExprPtr expr() {
    ExprPtr e = simple_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const Token& op = take();
      ExprPtr rhs = simple_expr();
      e = op.kind == Tok::Plus ? Expr::add_int(e, rhs, op.span)
                               : Expr::sub_int(e, rhs, op.span);
    }
    return e;
  }

  // One argument in application position (no infix operators).
  ExprPtr simple_expr() {
    const Token& t = peek();

    if (at(Tok::Int)) {
      take();
      return Expr::int_lit(t.int_value, t.span);
    }
    if (at(Tok::Minus) && peek(1).kind == Tok::Int) {
      take();
      const Token& n = take();
      return Expr::int_lit(-n.int_value, t.span);
    }
    if (at_ident("empty")) {
      take();
      return Expr::empty_set({}, t.span);
    }
    if (at_ident("add") || at_ident("remove")) {
      bool is_add = t.text == "add";
      take();
      auto [e, s] = two_args();
      return is_add ? Expr::set_add(e, s, t.span) : Expr::set_remove(e, s, t.span);
    }
    if (at_ident("fst") || at_ident("snd")) {
      bool is_fst = t.text == "fst";
      take();
      ExprPtr p = one_arg();
      return is_fst ? Expr::fst(p, t.span) : Expr::snd(p, t.span);
    }
    if (at_ident("old")) {
      take();
      const Token& sp = expect(Tok::Ident, "state parameter");
      return old_read(sp);
    }

    if (at(Tok::LParen)) {
      take();
      if (at_ident("old")) {
        take();
        const Token& sp = expect(Tok::Ident, "state parameter");
        expect(Tok::RParen, "')'");
        return old_read(sp);
      }
      ExprPtr a = expr();
      if (eat(Tok::Comma)) {
        ExprPtr b = expr();
        expect(Tok::RParen, "')'");
        return Expr::mk_pair(a, b, t.span);
      }
      expect(Tok::RParen, "')'");
      return a;
    }

    if (at(Tok::Ident)) return ident_expr();
    fail(t.span, "expected an expression, got '" + t.text + "'");
  }

  ExprPtr old_read(const Token& state_param) {
    if (!names_.allow_old)
      fail(state_param.span, "`old` is only allowed in ensures clauses", false);
    const FieldScope* sc = names_.state_param_scope(state_param.text);
    if (!sc || *sc != FieldScope::Current)
      fail(state_param.span, "`old` must apply to the state parameter", false);
    expect(Tok::Dot, "'.'");
    std::string field = parse_field_path(state_param.span);
    return Expr::field(field, FieldScope::Old, state_param.span);
  }

  ExprPtr ident_expr() {
    const Token& id = take();
    if (kReserved.count(id.text))
      fail(id.span, "unexpected reserved word '" + id.text + "'");

    if (names_.is_binder(id.text)) return Expr::var(id.text, id.span);
    if (names_.is_param(id.text)) return Expr::var(id.text, id.span);

    if (const FieldScope* sc = names_.state_param_scope(id.text)) {
      expect(Tok::Dot, "'.'");
      std::string field = parse_field_path(id.span);
      return Expr::field(field, *sc, id.span);
    }

    if (names_.bare_fields && names_.state) {
      if (names_.state->rw_info(id.text)) {
        if (at(Tok::Dot)) {
          take();
          const Token& comp = expect(Tok::Ident, "remove_wins_set component");
          if (comp.text != kRwAdd && comp.text != kRwRemoves)
            fail(comp.span, "unknown remove_wins_set component: " + comp.text, false);
          return Expr::field(id.text + "." + comp.text, FieldScope::Current, id.span);
        }
        fail(id.span, "field '" + id.text +
                          "' is a remove_wins_set; name a component or use in_set",
             false);
      }
      if (names_.state->field_index(id.text) >= 0)
        return Expr::field(id.text, FieldScope::Current, id.span);
    }

    fail(id.span, "unknown identifier: " + id.text, false);
  }

  // ---- application arguments ----
  //
  // Keyword functions accept both curried (`mem x S`) and parenthesized
  // (`mem(x, S)`) application. A parenthesized group followed by another
  // expression is the first (pair) argument of a curried call.

  bool starts_expr() const {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::LParen) return true;
    if (t.kind != Tok::Ident) return false;
    if (t.text == "empty" || t.text == "add" || t.text == "remove" ||
        t.text == "fst" || t.text == "snd" || t.text == "old")
      return true;
    return !kReserved.count(t.text) || names_.state_param_scope(t.text) != nullptr;
  }

  std::pair<ExprPtr, ExprPtr> two_args() {
    if (at(Tok::LParen)) {
      const Token& open = peek();
      take();
      if (at_ident("old")) {
        take();
        const Token& sp = expect(Tok::Ident, "state parameter");
        expect(Tok::RParen, "')'");
        ExprPtr first = old_read(sp);
        ExprPtr second = simple_expr();
        return {first, second};
      }
      ExprPtr a = expr();
      if (eat(Tok::Comma)) {
        ExprPtr b = expr();
        expect(Tok::RParen, "')'");
        if (starts_expr()) {
          // `(x, y)` was a pair literal; the second argument follows.
          ExprPtr second = simple_expr();
          return {Expr::mk_pair(a, b, open.span), second};
        }
        return {a, b};
      }
      expect(Tok::RParen, "')'");
      // `( e )` parenthesized first argument.
      ExprPtr second = simple_expr();
      return {a, second};
    }
    ExprPtr a = simple_expr();
    ExprPtr b = simple_expr();
    return {a, b};
  }

  ExprPtr one_arg() {
    if (at(Tok::LParen)) {
      take();
      ExprPtr a = expr();
      if (eat(Tok::Comma)) {
        ExprPtr b = expr();
        expect(Tok::RParen, "')'");
        return Expr::mk_pair(a, b, a->span);
      }
      expect(Tok::RParen, "')'");
      return a;
    }
    return simple_expr();
  }

  // ---- remove_wins_set sugar ----

  struct RwRef {
    std::string field;  // base field name
    FieldScope scope;
    SourceSpan span;
  };

  // Parses a reference to a whole remove_wins_set field: `f` (bare scope) or
  // `state.f` / `s1.f`. Fails recoverably so callers may backtrack.
  RwRef rw_ref() {
    const Token& id = expect(Tok::Ident, "remove_wins_set field");
    if (const FieldScope* sc = names_.state_param_scope(id.text)) {
      expect(Tok::Dot, "'.'");
      const Token& f = expect(Tok::Ident, "field name");
      if (!names_.state->rw_info(f.text))
        fail(f.span, "'" + f.text + "' is not a remove_wins_set field");
      return {f.text, *sc, f.span};
    }
    if (names_.bare_fields && names_.state && names_.state->rw_info(id.text))
      return {id.text, FieldScope::Current, id.span};
    fail(id.span, "'" + id.text + "' is not a remove_wins_set field");
  }

  std::pair<ExprPtr, RwRef> in_set_args() {
    if (at(Tok::LParen)) {
      take();
      ExprPtr a = expr();
      if (eat(Tok::Comma)) {
        // Either `in_set(e, ref)` call style or the tail of a pair literal.
        size_t save = pos_;
        try {
          RwRef r = rw_ref();
          expect(Tok::RParen, "')'");
          return {a, r};
        } catch (const ParseError& err) {
          if (!err.recoverable) throw;
          pos_ = save;
        }
        ExprPtr b = expr();
        expect(Tok::RParen, "')'");
        RwRef r = rw_ref();
        return {Expr::mk_pair(a, b, a->span), r};
      }
      expect(Tok::RParen, "')'");
      RwRef r = rw_ref();
      return {a, r};
    }
    ExprPtr e = simple_expr();
    RwRef r = rw_ref();
    return {e, r};
  }

  FormulaPtr desugar_in_set(const ExprPtr& e, const RwRef& r, SourceSpan sp) {
    ExprPtr adds = Expr::field(r.field + "." + kRwAdd, r.scope, r.span);
    ExprPtr removes = Expr::field(r.field + "." + kRwRemoves, r.scope, r.span);
    return Formula::conj(Formula::mem(e, adds, sp),
                         Formula::negation(Formula::mem(e, removes, sp), sp), sp);
  }

  FormulaPtr desugar_equal(SourceSpan sp) {
    bool call_style = eat(Tok::LParen);
    RwRef a = rw_ref();
    if (call_style) expect(Tok::Comma, "','");
    RwRef b = rw_ref();
    if (call_style) expect(Tok::RParen, "')'");
    auto comp = [&](const char* c) {
      return Formula::set_eq(Expr::field(a.field + "." + c, a.scope, a.span),
                             Expr::field(b.field + "." + c, b.scope, b.span), sp);
    };
    return Formula::conj(comp(kRwAdd), comp(kRwRemoves), sp);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Names names_;
};

ParseResult run_parse(const std::string& text, const std::string& filename,
                      bool run_typecheck) {
  ParseResult result;
  try {
    Parser p(lex(text, filename));
    Spec spec = p.parse_spec_body(filename);
    if (run_typecheck) {
      auto diags = typecheck(spec);
      if (!diags.empty()) {
        result.diagnostics = std::move(diags);
        return result;
      }
    }
    result.spec = std::move(spec);
  } catch (const LexError& e) {
    result.diagnostics.push_back({e.span, e.what()});
  } catch (const ParseError& e) {
    result.diagnostics.push_back({e.span, e.message});
  }
  return result;
}

}  // namespace

ParseResult parse_spec(const std::string& text, const std::string& filename) {
  return run_parse(text, filename, true);
}

ParseResult parse_spec_no_typecheck(const std::string& text,
                                    const std::string& filename) {
  return run_parse(text, filename, false);
}

FormulaParseResult parse_formula_in_op_scope(const Spec& spec, const std::string& op_name,
                                             const std::string& text) {
  FormulaParseResult out;
  const OpDecl* op = spec.find_op(op_name);
  if (!op) {
    out.diagnostics.push_back({{}, "unknown operation: " + op_name});
    return out;
  }
  try {
    Parser p(lex(text, "<formula>"));
    Names names;
    names.state = &spec.state;
    names.state_params = {{op->state_param, FieldScope::Current}};
    for (const auto& prm : op->params) names.params.push_back(prm.name);
    out.formula = p.parse_standalone_formula(names);

    TypeScope scope;
    scope.state = &spec.state;
    scope.vars = op->params;
    check_formula(out.formula, scope, out.diagnostics);
    if (!out.diagnostics.empty()) out.formula = nullptr;
  } catch (const LexError& e) {
    out.diagnostics.push_back({e.span, e.what()});
  } catch (const ParseError& e) {
    out.diagnostics.push_back({e.span, e.message});
  }
  return out;
}

}  // namespace cise
