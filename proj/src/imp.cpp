// Parser and clause generation for the small imperative language.
#include "chc/imp.hpp"

#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace chc::imp {
namespace {

// ---------------------------------------------------------------- lexing --

struct Tok {
  enum Kind { KNum, KIdent, KPunct, KEnd };
  Kind kind = KEnd;
  std::string text;
  size_t line = 1;
};

bool is_keyword(const std::string& s) {
  return s == "int" || s == "if" || s == "else" || s == "while" || s == "return" || s == "true";
}

std::vector<Tok> lex(const std::string& text, size_t start_line = 1) {
  static const char* two_char[] = {"<=", ">=", "==", "!=", "&&"};
  std::vector<Tok> out;
  size_t line = start_line;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::KNum, text.substr(i, j - i), line});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::KIdent, text.substr(i, j - i), line});
      i = j;
      continue;
    }
    bool matched = false;
    for (const char* op : two_char) {
      if (c == op[0] && i + 1 < n && text[i + 1] == op[1]) {
        out.push_back({Tok::KPunct, op, line});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("(){};,=<>+-*").find(c) != std::string::npos) {
      out.push_back({Tok::KPunct, std::string(1, c), line});
      ++i;
      continue;
    }
    throw ImpError(std::string("unexpected character '") + c + "'", line);
  }
  out.push_back({Tok::KEnd, "", line});
  return out;
}

// --------------------------------------------------------------- parsing --

StmtPtr mk_stmt(Stmt::Kind k, size_t line) {
  auto s = std::make_unique<Stmt>();
  s->kind = k;
  s->line = line;
  return s;
}

struct Parser {
  std::vector<Tok> toks;
  size_t pos = 0;

  explicit Parser(std::vector<Tok> t) : toks(std::move(t)) {}

  const Tok& cur() const { return toks[pos]; }
  bool at_end() const { return cur().kind == Tok::KEnd; }
  [[noreturn]] void fail(const std::string& msg) const { throw ImpError(msg, cur().line); }

  bool is_punct(const char* s) const { return cur().kind == Tok::KPunct && cur().text == s; }
  bool is_kw(const char* s) const { return cur().kind == Tok::KIdent && cur().text == s; }
  void expect_punct(const char* s) {
    if (!is_punct(s)) fail(std::string("expected '") + s + "'");
    ++pos;
  }
  void expect_end(const std::string& what) {
    if (!at_end()) fail("unexpected trailing input in " + what);
  }

  std::string expect_ident(const char* what) {
    if (cur().kind != Tok::KIdent || is_keyword(cur().text))
      fail(std::string("expected ") + what);
    const std::string name = cur().text;
    if (!std::islower(static_cast<unsigned char>(name[0])) && name[0] != '_')
      fail(std::string(what) + " must start with a lowercase letter");
    ++pos;
    return name;
  }

  LinearTerm factor() {
    if (is_punct("(")) {
      ++pos;
      LinearTerm e = expr();
      expect_punct(")");
      return e;
    }
    if (is_punct("-")) {
      ++pos;
      return -factor();
    }
    if (cur().kind == Tok::KNum) {
      LinearTerm t{Rat(cur().text)};
      ++pos;
      return t;
    }
    if (cur().kind == Tok::KIdent && !is_keyword(cur().text)) {
      std::string v = expect_ident("variable");
      if (is_punct("("))
        fail("function calls are only allowed as the right-hand side of an assignment");
      return LinearTerm::var(v);
    }
    fail("expected expression");
  }

  LinearTerm product() {
    LinearTerm t = factor();
    while (is_punct("*")) {
      ++pos;
      LinearTerm r = factor();
      if (!t.is_constant() && !r.is_constant()) fail("nonlinear product");
      t = t.is_constant() ? r * t.constant : t * r.constant;
    }
    return t;
  }

  LinearTerm expr() {
    LinearTerm t = product();
    while (is_punct("+") || is_punct("-")) {
      bool add = is_punct("+");
      ++pos;
      LinearTerm r = product();
      if (add)
        t += r;
      else
        t -= r;
    }
    return t;
  }

  // A single comparison, normalised to "term REL 0".
  AtomicConstraint comparison() {
    LinearTerm a = expr();
    std::string op = cur().kind == Tok::KPunct ? cur().text : "";
    if (op != "<" && op != "<=" && op != ">" && op != ">=" && op != "==" && op != "!=")
      fail("expected a comparison operator (<, <=, >, >=, ==, !=)");
    ++pos;
    LinearTerm b = expr();
    if (op == "<=") return {a - b, Rel::Le};
    if (op == "<") return {a - b, Rel::Lt};
    if (op == ">=") return {b - a, Rel::Le};
    if (op == ">") return {b - a, Rel::Lt};
    if (op == "==") return {a - b, Rel::Eq};
    return {a - b, Rel::Ne};
  }

  // Conjunction for the pre/post pragmas; "true" is the empty conjunction.
  std::vector<AtomicConstraint> conjunction() {
    if (is_kw("true")) {
      ++pos;
      return {};
    }
    std::vector<AtomicConstraint> cs{comparison()};
    while (is_punct("&&")) {
      ++pos;
      cs.push_back(comparison());
    }
    return cs;
  }

  std::vector<StmtPtr> block() {
    expect_punct("{");
    std::vector<StmtPtr> out;
    while (!is_punct("}")) {
      if (at_end()) fail("unterminated block");
      out.push_back(stmt());
    }
    ++pos;
    return out;
  }

  StmtPtr stmt() {
    const size_t ln = cur().line;
    if (is_kw("if")) {
      ++pos;
      auto s = mk_stmt(Stmt::Kind::If, ln);
      expect_punct("(");
      s->cond = comparison();
      expect_punct(")");
      s->then_body = block();
      if (is_kw("else")) {
        ++pos;
        s->else_body = block();
      }
      return s;
    }
    if (is_kw("while")) {
      ++pos;
      auto s = mk_stmt(Stmt::Kind::While, ln);
      expect_punct("(");
      s->cond = comparison();
      expect_punct(")");
      s->then_body = block();
      return s;
    }
    if (is_kw("return")) {
      ++pos;
      auto s = mk_stmt(Stmt::Kind::Return, ln);
      s->expr = expr();
      expect_punct(";");
      return s;
    }
    if (is_kw("int")) ++pos;  // optional declaration prefix
    std::string lhs = expect_ident("variable name");
    expect_punct("=");
    StmtPtr s;
    if (cur().kind == Tok::KIdent && !is_keyword(cur().text) &&
        toks[pos + 1].kind == Tok::KPunct && toks[pos + 1].text == "(") {
      s = mk_stmt(Stmt::Kind::Call, ln);
      s->callee = expect_ident("function name");
      expect_punct("(");
      if (!is_punct(")")) {
        s->args.push_back(expr());
        while (is_punct(",")) {
          ++pos;
          s->args.push_back(expr());
        }
      }
      expect_punct(")");
    } else {
      s = mk_stmt(Stmt::Kind::Assign, ln);
      s->expr = expr();
    }
    s->lhs = std::move(lhs);
    expect_punct(";");
    return s;
  }

  Function function() {
    if (!is_kw("int")) fail("expected a function definition");
    const size_t ln = cur().line;
    ++pos;
    Function f;
    f.line = ln;
    f.name = expect_ident("function name");
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        if (!is_kw("int")) fail("expected 'int' before parameter name");
        ++pos;
        f.params.push_back(expect_ident("parameter name"));
        if (!is_punct(",")) break;
        ++pos;
      }
    }
    expect_punct(")");
    f.body = block();
    return f;
  }
};

// Returns are only allowed as the last top-level statement of a function.
void reject_returns(const std::vector<StmtPtr>& stmts) {
  for (const auto& s : stmts) {
    if (s->kind == Stmt::Kind::Return)
      throw ImpError("return is only allowed as the last statement of a function", s->line);
    reject_returns(s->then_body);
    reject_returns(s->else_body);
  }
}

void validate_function(const Function& f) {
  if (f.body.empty() || f.body.back()->kind != Stmt::Kind::Return)
    throw ImpError("function '" + f.name + "' must end with a return statement", f.line);
  for (size_t i = 0; i + 1 < f.body.size(); ++i) {
    if (f.body[i]->kind == Stmt::Kind::Return)
      throw ImpError("return is only allowed as the last statement of a function",
                     f.body[i]->line);
    reject_returns(f.body[i]->then_body);
    reject_returns(f.body[i]->else_body);
  }
}

// --------------------------------------------------------------- pragmas --

struct PragmaText {
  std::string text;
  size_t line = 0;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void scan_pragmas(const std::string& text, std::optional<PragmaText>& pre,
                  std::optional<PragmaText>& post, std::optional<PragmaText>& entry) {
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t p = raw.find("//");
    if (p == std::string::npos) continue;
    std::string rest = trim(raw.substr(p + 2));
    auto take = [&](const char* key, std::optional<PragmaText>& slot) {
      const size_t klen = std::string(key).size();
      if (rest.compare(0, klen, key) != 0) return false;
      if (slot)
        throw ImpError(std::string("duplicate '") + key + "' pragma", lineno);
      slot = PragmaText{trim(rest.substr(klen)), lineno};
      return true;
    };
    if (take("pre:", pre) || take("post:", post) || take("entry:", entry)) continue;
  }
}

// ----------------------------------------------------------- translation --

std::string cap(const std::string& v) {
  std::string b = v;
  b[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(b[0])));
  return b;
}

// Hands out clause variables for source variables. Parameters get the bare
// capitalised name; each assignment gets the next numbered version. A
// reserved base (the function result) is never handed out bare, so the
// result variable's versions start at 0.
struct Namer {
  std::set<std::string> reserved;
  VarSet used;
  std::map<std::string, int> issued;

  Var issue(const std::string& v) {
    const std::string b = cap(v);
    const bool res = reserved.count(b) > 0;
    int k = issued[v];
    std::string cand;
    for (;;) {
      cand = (k == 0 && !res) ? b : b + std::to_string(k);
      if (!used.count(cand)) break;
      ++k;
    }
    issued[v] = k + 1;
    used.insert(cand);
    return cand;
  }
};

using Env = std::map<std::string, Var>;

LinearTerm eval_expr(const LinearTerm& e, const Env& env, size_t line) {
  std::map<Var, LinearTerm> sub;
  for (const auto& [v, k] : e.coeffs) {
    auto it = env.find(v);
    if (it == env.end())
      throw ImpError("variable '" + v + "' used before assignment", line);
    sub[v] = LinearTerm::var(it->second);
  }
  return e.substituted(sub);
}

AtomicConstraint eval_cond(const AtomicConstraint& c, const Env& env, size_t line) {
  return {eval_expr(c.expr, env, line), c.rel};
}

AtomicConstraint negate_atomic(const AtomicConstraint& a) {
  switch (a.rel) {
    case Rel::Eq: return {a.expr, Rel::Ne};
    case Rel::Ne: return {a.expr, Rel::Eq};
    case Rel::Le: return {-a.expr, Rel::Lt};
    case Rel::Lt: return {-a.expr, Rel::Le};
  }
  return a;
}

std::string fresh_pred_name(const std::string& base, std::set<std::string>& taken) {
  if (taken.insert(base).second) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (taken.insert(cand).second) return cand;
  }
}

const Function* find_fn(const SourceProgram& src, const std::string& name) {
  for (const auto& f : src.functions)
    if (f.name == name) return &f;
  return nullptr;
}

void expr_reads(const LinearTerm& e, std::set<std::string>& out) {
  for (const auto& [v, k] : e.coeffs) out.insert(v);
}

void stmt_reads(const Stmt& s, std::set<std::string>& out) {
  switch (s.kind) {
    case Stmt::Kind::Assign:
    case Stmt::Kind::Return: expr_reads(s.expr, out); break;
    case Stmt::Kind::Call:
      for (const auto& a : s.args) expr_reads(a, out);
      break;
    case Stmt::Kind::If:
    case Stmt::Kind::While:
      expr_reads(s.cond.expr, out);
      for (const auto& b : s.then_body) stmt_reads(*b, out);
      for (const auto& b : s.else_body) stmt_reads(*b, out);
      break;
  }
}

void expr_occ(const LinearTerm& e, std::vector<std::string>& ord, std::set<std::string>& seen) {
  for (const auto& [v, k] : e.coeffs)
    if (seen.insert(v).second) ord.push_back(v);
}

// Source variables in first-occurrence order (assignment targets first).
void stmt_occ(const Stmt& s, std::vector<std::string>& ord, std::set<std::string>& seen) {
  switch (s.kind) {
    case Stmt::Kind::Assign:
    case Stmt::Kind::Call:
      if (seen.insert(s.lhs).second) ord.push_back(s.lhs);
      expr_occ(s.expr, ord, seen);
      for (const auto& a : s.args) expr_occ(a, ord, seen);
      break;
    case Stmt::Kind::Return: expr_occ(s.expr, ord, seen); break;
    case Stmt::Kind::If:
    case Stmt::Kind::While:
      expr_occ(s.cond.expr, ord, seen);
      for (const auto& b : s.then_body) stmt_occ(*b, ord, seen);
      for (const auto& b : s.else_body) stmt_occ(*b, ord, seen);
      break;
  }
}

void check_entry(const SourceProgram& s, const Function*& fn) {
  fn = find_fn(s, s.spec.entry_fn);
  if (!fn) throw ImpError("entry calls undefined function '" + s.spec.entry_fn + "'", 0);
  if (fn->params.size() != s.spec.entry_args.size())
    throw ImpError("entry call to '" + s.spec.entry_fn + "' has wrong arity", 0);
}

// Environment for the specification pragmas: every pragma variable gets its
// bare capitalised name.
Env pragma_env(const Spec& spec, Namer& nm) {
  std::set<std::string> vars;
  for (const auto& c : spec.post) expr_reads(c.expr, vars);
  for (const auto& c : spec.pre.conjuncts) expr_reads(c.expr, vars);
  for (const auto& a : spec.entry_args) expr_reads(a, vars);
  if (spec.entry_lhs) vars.insert(*spec.entry_lhs);
  Env env;
  for (const auto& v : vars) env[v] = nm.issue(v);
  return env;
}

// ------------------------------------------------------ big-step clauses --

struct LoopInfo {
  std::string pred;
  std::vector<std::string> live;
};

struct BigstepFn {
  const SourceProgram& src;
  const Function& fn;
  std::set<std::string>& preds;
  std::vector<Clause>& out;

  BigstepFn(const SourceProgram& s, const Function& f, std::set<std::string>& p,
            std::vector<Clause>& o)
      : src(s), fn(f), preds(p), out(o) {}

  Namer nm;
  Var outv;
  std::vector<std::string> occ_order;
  std::map<const Stmt*, LoopInfo> loops;

  using Item = std::variant<const Stmt*, const LoopInfo*>;

  void run() {
    const Stmt& ret = *fn.body.back();
    const auto rv = ret.expr.as_var();
    const std::string base = rv ? cap(*rv) : std::string("R");
    nm.reserved.insert(base);
    nm.used.insert(base);
    outv = base;

    std::set<std::string> seen;
    for (const auto& p : fn.params)
      if (seen.insert(p).second) occ_order.push_back(p);
    for (const auto& s : fn.body) stmt_occ(*s, occ_order, seen);

    Env env;
    std::vector<LinearTerm> hargs;
    for (const auto& p : fn.params) {
      Var v = nm.issue(p);
      env[p] = v;
      hargs.push_back(LinearTerm::var(v));
    }
    hargs.push_back(LinearTerm::var(outv));
    Atom head{fn.name, std::move(hargs)};

    std::vector<Item> items;
    for (const auto& s : fn.body) items.push_back(s.get());
    walk(head, std::move(env), {}, {}, std::move(items));
  }

  Atom loop_call(const LoopInfo& info, const Env& env, size_t line) const {
    std::vector<LinearTerm> args;
    for (const auto& v : info.live) {
      auto it = env.find(v);
      if (it == env.end())
        throw ImpError("variable '" + v + "' may be used before assignment", line);
      args.push_back(LinearTerm::var(it->second));
    }
    args.push_back(LinearTerm::var(outv));
    return Atom{info.pred, std::move(args)};
  }

  std::pair<const LoopInfo*, bool> loop_info(const Stmt* s, const Env& env,
                                             const std::vector<Item>& rest) {
    auto it = loops.find(s);
    if (it != loops.end()) return {&it->second, false};

    std::set<std::string> reads;
    expr_reads(s->cond.expr, reads);
    for (const auto& b : s->then_body) stmt_reads(*b, reads);
    for (const auto& r : rest) {
      if (const auto* const* sp = std::get_if<const Stmt*>(&r)) {
        stmt_reads(**sp, reads);
      } else {
        // enclosing loop jump: its live variables flow through this loop
        const auto* li = std::get<const LoopInfo*>(r);
        reads.insert(li->live.begin(), li->live.end());
      }
    }
    LoopInfo info;
    info.pred = fresh_pred_name("while", preds);
    for (const auto& v : occ_order)
      if (env.count(v) && reads.count(v)) info.live.push_back(v);
    auto [slot, inserted] = loops.emplace(s, std::move(info));
    (void)inserted;
    return {&slot->second, true};
  }

  void emit(const Atom& head, std::vector<AtomicConstraint> cs, std::vector<Atom> atoms) {
    out.push_back(Clause{head, LinearConstraint{std::move(cs)}, std::move(atoms)});
  }

  void walk(const Atom& head, Env env, std::vector<AtomicConstraint> cs,
            std::vector<Atom> atoms, std::vector<Item> items) {
    while (!items.empty()) {
      Item it = items.front();
      items.erase(items.begin());
      if (const auto* const* lp = std::get_if<const LoopInfo*>(&it)) {
        atoms.push_back(loop_call(**lp, env, 0));
        emit(head, std::move(cs), std::move(atoms));
        return;
      }
      const Stmt* s = std::get<const Stmt*>(it);
      switch (s->kind) {
        case Stmt::Kind::Assign: {
          LinearTerm rhs = eval_expr(s->expr, env, s->line);
          Var v = nm.issue(s->lhs);
          cs.push_back({LinearTerm::var(v) - rhs, Rel::Eq});
          env[s->lhs] = v;
          break;
        }
        case Stmt::Kind::Call: {
          const Function* callee = find_fn(src, s->callee);
          if (!callee)
            throw ImpError("call to undefined function '" + s->callee + "'", s->line);
          if (callee->params.size() != s->args.size())
            throw ImpError("call to '" + s->callee + "' has wrong arity", s->line);
          std::vector<LinearTerm> args;
          for (const auto& a : s->args) args.push_back(eval_expr(a, env, s->line));
          Var v = nm.issue(s->lhs);
          args.push_back(LinearTerm::var(v));
          atoms.push_back(Atom{s->callee, std::move(args)});
          env[s->lhs] = v;
          break;
        }
        case Stmt::Kind::Return: {
          cs.push_back({LinearTerm::var(outv) - eval_expr(s->expr, env, s->line), Rel::Eq});
          emit(head, std::move(cs), std::move(atoms));
          return;
        }
        case Stmt::Kind::If: {
          std::vector<Item> t, e;
          for (const auto& b : s->then_body) t.push_back(b.get());
          t.insert(t.end(), items.begin(), items.end());
          for (const auto& b : s->else_body) e.push_back(b.get());
          e.insert(e.end(), items.begin(), items.end());
          auto cs2 = cs;
          cs.push_back(eval_cond(s->cond, env, s->line));
          walk(head, env, std::move(cs), atoms, std::move(t));
          cs2.push_back(eval_cond(negate_atomic(s->cond), env, s->line));
          walk(head, std::move(env), std::move(cs2), std::move(atoms), std::move(e));
          return;
        }
        case Stmt::Kind::While: {
          auto [info, fresh] = loop_info(s, env, items);
          atoms.push_back(loop_call(*info, env, s->line));
          emit(head, std::move(cs), std::move(atoms));
          if (fresh) {
            Env eh;
            std::vector<LinearTerm> fargs;
            for (const auto& v : info->live) {
              Var nv = nm.issue(v);
              eh[v] = nv;
              fargs.push_back(LinearTerm::var(nv));
            }
            fargs.push_back(LinearTerm::var(outv));
            Atom lhead{info->pred, std::move(fargs)};
            std::vector<Item> body;
            for (const auto& b : s->then_body) body.push_back(b.get());
            body.push_back(info);
            walk(lhead, eh, {eval_cond(s->cond, eh, s->line)}, {}, std::move(body));
            walk(lhead, eh, {eval_cond(negate_atomic(s->cond), eh, s->line)}, {},
                 std::move(items));
          }
          return;
        }
      }
    }
    throw ImpError("internal: path ended without a return", 0);
  }
};

// ------------------------------------------- backward-reachability clauses --

void reject_calls(const std::vector<StmtPtr>& stmts) {
  for (const auto& s : stmts) {
    if (s->kind == Stmt::Kind::Call)
      throw ImpError("entry function must be call-free for backward reachability", s->line);
    reject_calls(s->then_body);
    reject_calls(s->else_body);
  }
}

struct ReachTrans {
  const SourceProgram& src;
  std::vector<Clause>& out;

  ReachTrans(const SourceProgram& s, std::vector<Clause>& o) : src(s), out(o) {}

  Namer nm;
  std::set<std::string> preds{kFalseHead};
  std::vector<std::string> occ_order;
  std::set<std::string> post_reads;
  std::map<const Stmt*, LoopInfo> loops;

  using Item = std::variant<const Stmt*, const LoopInfo*>;

  std::deque<Stmt> synth;
  std::vector<const Stmt*> inlined;

  void build_inlined(const Function& fn) {
    for (size_t i = 0; i < fn.params.size(); ++i) {
      synth.emplace_back();
      Stmt& st = synth.back();
      st.kind = Stmt::Kind::Assign;
      st.lhs = fn.params[i];
      st.expr = src.spec.entry_args[i];
      inlined.push_back(&st);
    }
    for (size_t i = 0; i + 1 < fn.body.size(); ++i) inlined.push_back(fn.body[i].get());
    synth.emplace_back();
    Stmt& st = synth.back();
    st.kind = Stmt::Kind::Assign;
    st.lhs = *src.spec.entry_lhs;
    st.expr = fn.body.back()->expr;
    inlined.push_back(&st);
  }

  // Variables read before being assigned, in read order: the state the goal
  // must supply at the entry point.
  std::vector<std::string> entry_live() const {
    std::vector<std::string> live;
    std::set<std::string> written, seen;
    auto note_reads = [&](const LinearTerm& e) {
      for (const auto& [v, k] : e.coeffs)
        if (!written.count(v) && seen.insert(v).second) live.push_back(v);
    };
    auto scan = [&](auto&& self, const Stmt& s) -> void {
      switch (s.kind) {
        case Stmt::Kind::Assign:
        case Stmt::Kind::Return:
          note_reads(s.expr);
          if (s.kind == Stmt::Kind::Assign) written.insert(s.lhs);
          break;
        case Stmt::Kind::Call: break;  // rejected earlier
        case Stmt::Kind::If:
        case Stmt::Kind::While:
          note_reads(s.cond.expr);
          for (const auto& b : s.then_body) self(self, *b);
          for (const auto& b : s.else_body) self(self, *b);
          break;
      }
    };
    for (const Stmt* s : inlined) scan(scan, *s);
    for (const auto& c : src.spec.post) {
      for (const auto& [v, k] : c.expr.coeffs)
        if (!written.count(v) && seen.insert(v).second) live.push_back(v);
    }
    return live;
  }

  Atom point_call(const LoopInfo& info, const Env& env, size_t line) const {
    std::vector<LinearTerm> args;
    for (const auto& v : info.live) {
      auto it = env.find(v);
      if (it == env.end())
        throw ImpError("variable '" + v + "' may be used before assignment", line);
      args.push_back(LinearTerm::var(it->second));
    }
    return Atom{info.pred, std::move(args)};
  }

  std::pair<const LoopInfo*, bool> loop_info(const Stmt* s, const Env& env,
                                             const std::vector<Item>& rest) {
    auto it = loops.find(s);
    if (it != loops.end()) return {&it->second, false};

    std::set<std::string> reads = post_reads;
    expr_reads(s->cond.expr, reads);
    for (const auto& b : s->then_body) stmt_reads(*b, reads);
    for (const auto& r : rest) {
      if (const auto* const* sp = std::get_if<const Stmt*>(&r)) {
        stmt_reads(**sp, reads);
      } else {
        const auto* li = std::get<const LoopInfo*>(r);
        reads.insert(li->live.begin(), li->live.end());
      }
    }
    LoopInfo info;
    info.pred = fresh_pred_name("while_error", preds);
    for (const auto& v : occ_order)
      if (env.count(v) && reads.count(v)) info.live.push_back(v);
    auto [slot, inserted] = loops.emplace(s, std::move(info));
    (void)inserted;
    return {&slot->second, true};
  }

  void emit(const Atom& head, std::vector<AtomicConstraint> cs, std::vector<Atom> atoms) {
    out.push_back(Clause{head, LinearConstraint{std::move(cs)}, std::move(atoms)});
  }

  void walk(const Atom& head, Env env, std::vector<AtomicConstraint> cs,
            std::vector<Item> items) {
    while (!items.empty()) {
      Item it = items.front();
      items.erase(items.begin());
      if (const auto* const* lp = std::get_if<const LoopInfo*>(&it)) {
        emit(head, std::move(cs), {point_call(**lp, env, 0)});
        return;
      }
      const Stmt* s = std::get<const Stmt*>(it);
      switch (s->kind) {
        case Stmt::Kind::Assign: {
          LinearTerm rhs = eval_expr(s->expr, env, s->line);
          Var v = nm.issue(s->lhs);
          cs.push_back({LinearTerm::var(v) - rhs, Rel::Eq});
          env[s->lhs] = v;
          break;
        }
        case Stmt::Kind::If: {
          std::vector<Item> t, e;
          for (const auto& b : s->then_body) t.push_back(b.get());
          t.insert(t.end(), items.begin(), items.end());
          for (const auto& b : s->else_body) e.push_back(b.get());
          e.insert(e.end(), items.begin(), items.end());
          auto cs2 = cs;
          cs.push_back(eval_cond(s->cond, env, s->line));
          walk(head, env, std::move(cs), std::move(t));
          cs2.push_back(eval_cond(negate_atomic(s->cond), env, s->line));
          walk(head, std::move(env), std::move(cs2), std::move(e));
          return;
        }
        case Stmt::Kind::While: {
          auto [info, fresh] = loop_info(s, env, items);
          emit(head, std::move(cs), {point_call(*info, env, s->line)});
          if (fresh) {
            Env eh;
            std::vector<LinearTerm> fargs;
            for (const auto& v : info->live) {
              Var nv = nm.issue(v);
              eh[v] = nv;
              fargs.push_back(LinearTerm::var(nv));
            }
            Atom lhead{info->pred, std::move(fargs)};
            std::vector<Item> body;
            for (const auto& b : s->then_body) body.push_back(b.get());
            body.push_back(info);
            walk(lhead, eh, {eval_cond(s->cond, eh, s->line)}, std::move(body));
            walk(lhead, eh, {eval_cond(negate_atomic(s->cond), eh, s->line)},
                 std::move(items));
          }
          return;
        }
        case Stmt::Kind::Call:
        case Stmt::Kind::Return:
          throw ImpError("internal: unexpected statement in reachability walk", s->line);
      }
    }
    // End of program: one clause per violated postcondition conjunct.
    for (const auto& pc : src.spec.post)
      emit(head, [&] {
        auto cs2 = cs;
        cs2.push_back(eval_cond(negate_atomic(pc), env, 0));
        return cs2;
      }(), {});
  }

  void run() {
    const Function* fn = nullptr;
    check_entry(src, fn);
    reject_calls(fn->body);
    build_inlined(*fn);

    std::set<std::string> seen;
    for (const Stmt* s : inlined) stmt_occ(*s, occ_order, seen);
    for (const auto& c : src.spec.post) expr_reads(c.expr, post_reads);

    std::string base = "assign";
    if (inlined.front()->kind == Stmt::Kind::If) base = "if";
    if (inlined.front()->kind == Stmt::Kind::While) base = "while";
    const std::string entry_pred = fresh_pred_name(base + "_error", preds);

    Env env0;
    std::vector<LinearTerm> eargs;
    for (const auto& v : entry_live()) {
      Var nv = nm.issue(v);
      env0[v] = nv;
      eargs.push_back(LinearTerm::var(nv));
    }
    Atom entry{entry_pred, std::move(eargs)};

    // goal: a state satisfying the precondition reaches the error
    Env genv = env0;
    Clause goal;
    for (const auto& c : src.spec.pre.conjuncts) {
      for (const auto& [v, k] : c.expr.coeffs)
        if (!genv.count(v)) genv[v] = nm.issue(v);
      goal.constr.add(eval_cond(c, genv, 0));
    }
    goal.body.push_back(entry);
    if (!src.spec.post_true) out.push_back(std::move(goal));

    std::vector<Item> items(inlined.begin(), inlined.end());
    walk(entry, std::move(env0), {}, std::move(items));
  }
};

}  // namespace

SourceProgram parse_source(const std::string& text) {
  SourceProgram sp;
  std::optional<PragmaText> pre, post, entry;
  scan_pragmas(text, pre, post, entry);
  if (pre) {
    Parser p(lex(pre->text, pre->line));
    sp.spec.pre = LinearConstraint{p.conjunction()};
    p.expect_end("pre pragma");
  }
  if (post) {
    Parser p(lex(post->text, post->line));
    sp.spec.post = p.conjunction();
    sp.spec.post_true = sp.spec.post.empty();
    p.expect_end("post pragma");
  }
  if (entry) {
    Parser p(lex(entry->text, entry->line));
    sp.spec.entry_lhs = p.expect_ident("entry variable");
    p.expect_punct("=");
    sp.spec.entry_fn = p.expect_ident("entry function name");
    p.expect_punct("(");
    if (!p.is_punct(")")) {
      sp.spec.entry_args.push_back(p.expr());
      while (p.is_punct(",")) {
        ++p.pos;
        sp.spec.entry_args.push_back(p.expr());
      }
    }
    p.expect_punct(")");
    if (p.is_punct(";")) ++p.pos;
    p.expect_end("entry pragma");
  }

  Parser p(lex(text));
  while (!p.at_end()) sp.functions.push_back(p.function());
  if (sp.functions.empty()) throw ImpError("no function definitions", 1);
  std::set<std::string> names;
  for (const auto& f : sp.functions) {
    if (!names.insert(f.name).second)
      throw ImpError("duplicate function name '" + f.name + "'", f.line);
    validate_function(f);
  }
  return sp;
}

Program translate_bigstep(const SourceProgram& s) {
  Program out;
  std::set<std::string> preds{kFalseHead};
  for (const auto& f : s.functions) preds.insert(f.name);

  if (s.spec.has_entry()) {
    const Function* fn = nullptr;
    check_entry(s, fn);
    if (!s.spec.post_true) {
      Namer nm;
      Env penv = pragma_env(s.spec, nm);
      std::vector<LinearTerm> eargs;
      for (const auto& a : s.spec.entry_args) eargs.push_back(eval_expr(a, penv, 0));
      eargs.push_back(LinearTerm::var(penv.at(*s.spec.entry_lhs)));
      Atom call{s.spec.entry_fn, std::move(eargs)};
      for (const auto& pc : s.spec.post) {
        Clause g;
        g.constr.add(eval_cond(negate_atomic(pc), penv, 0));
        for (const auto& c : s.spec.pre.conjuncts) g.constr.add(eval_cond(c, penv, 0));
        g.body.push_back(call);
        out.clauses.push_back(std::move(g));
      }
    }
  } else if (!s.spec.post_true || !s.spec.pre.is_top()) {
    throw ImpError("pre/post pragmas require an entry pragma", 0);
  }

  for (const auto& f : s.functions) {
    BigstepFn tr{s, f, preds, out.clauses};
    tr.run();
  }
  return out;
}

Program translate_reach(const SourceProgram& s) {
  if (!s.spec.has_entry())
    throw ImpError("backward reachability requires an entry pragma", 0);
  Program out;
  ReachTrans tr{s, out.clauses};
  tr.run();
  return out;
}

}  // namespace chc::imp
