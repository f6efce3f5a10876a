#include "chc/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace chc {
namespace {

enum class Tok { Ident, Variable, Number, LParen, RParen, Comma, Dot, Neck, Rel, Plus, Minus, Star, Slash, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::optional<DomainMode> pragma_mode;

  Token next() {
    skip_ws_and_comments();
    int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Tok::End, "", line, col};
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) num += get();
      return {Tok::Number, num, line, col};
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        id += get();
      return {Tok::Variable, id, line, col};
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        id += get();
      return {Tok::Ident, id, line, col};
    }
    switch (c) {
      case '(': get(); return {Tok::LParen, "(", line, col};
      case ')': get(); return {Tok::RParen, ")", line, col};
      case ',': get(); return {Tok::Comma, ",", line, col};
      case '.': get(); return {Tok::Dot, ".", line, col};
      case '+': get(); return {Tok::Plus, "+", line, col};
      case '-': get(); return {Tok::Minus, "-", line, col};
      case '*': get(); return {Tok::Star, "*", line, col};
      case '/': get(); return {Tok::Slash, "/", line, col};
      case ':':
        get();
        if (pos_ < s_.size() && s_[pos_] == '-') {
          get();
          return {Tok::Neck, ":-", line, col};
        }
        throw ParseError("expected ':-'", line, col);
      case '=':
        get();
        if (pos_ < s_.size() && s_[pos_] == '<') {
          get();
          return {Tok::Rel, "=<", line, col};
        }
        if (pos_ < s_.size() && s_[pos_] == '\\') {
          get();
          if (pos_ < s_.size() && s_[pos_] == '=') {
            get();
            return {Tok::Rel, "=\\=", line, col};
          }
          throw ParseError("expected '=\\='", line, col);
        }
        return {Tok::Rel, "=", line, col};
      case '<': get(); return {Tok::Rel, "<", line, col};
      case '>':
        get();
        if (pos_ < s_.size() && s_[pos_] == '=') {
          get();
          return {Tok::Rel, ">=", line, col};
        }
        return {Tok::Rel, ">", line, col};
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  char get() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws_and_comments() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '%') {
        std::string comment;
        while (pos_ < s_.size() && s_[pos_] != '\n') comment += get();
        scan_pragma(comment);
      } else {
        break;
      }
    }
  }

  void scan_pragma(const std::string& comment) {
    // Recognised pragma: "% mode: integer" / "% mode: rational" (int/rat ok).
    size_t i = 1;
    while (i < comment.size() && (comment[i] == ' ' || comment[i] == '\t')) ++i;
    if (comment.compare(i, 5, "mode:") != 0) return;
    i += 5;
    while (i < comment.size() && (comment[i] == ' ' || comment[i] == '\t')) ++i;
    std::string word;
    while (i < comment.size() && std::isalpha(static_cast<unsigned char>(comment[i]))) word += comment[i++];
    if (word == "integer" || word == "int")
      pragma_mode = DomainMode::Integer;
    else if (word == "rational" || word == "rat")
      pragma_mode = DomainMode::Rational;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { advance(); }

  Program program() {
    Program p;
    std::map<std::string, size_t> arities;
    while (cur_.kind != Tok::End) {
      p.clauses.push_back(clause(arities));
    }
    if (lex_.pragma_mode) p.mode = *lex_.pragma_mode;
    return p;
  }

  Clause clause(std::map<std::string, size_t>& arities) {
    Clause c;
    if (cur_.kind == Tok::Ident && cur_.text == "false") {
      advance();
    } else {
      c.head = atom(arities);
    }
    if (cur_.kind == Tok::Neck) {
      advance();
      body(c, arities);
    }
    expect(Tok::Dot, "expected '.'");
    return c;
  }

  LinearConstraint constraint_only() {
    LinearConstraint out;
    if (cur_.kind == Tok::End) return out;
    while (true) {
      out.add(comparison());
      if (cur_.kind != Tok::Comma) break;
      advance();
    }
    expect(Tok::End, "trailing input after constraint");
    return out;
  }

 private:
  void body(Clause& c, std::map<std::string, size_t>& arities) {
    while (true) {
      if (cur_.kind == Tok::Ident) {
        if (cur_.text == "false")
          throw ParseError("'false' may only occur as a clause head", cur_.line, cur_.col);
        c.body.push_back(atom(arities));
      } else {
        c.constr.add(comparison());
      }
      if (cur_.kind != Tok::Comma) break;
      advance();
    }
  }

  Atom atom(std::map<std::string, size_t>& arities) {
    Token name = expect(Tok::Ident, "expected predicate name");
    Atom a;
    a.pred = name.text;
    if (cur_.kind == Tok::LParen) {
      advance();
      while (true) {
        a.args.push_back(linear_term());
        if (cur_.kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "expected ')'");
    }
    auto [it, inserted] = arities.emplace(a.pred, a.args.size());
    if (!inserted && it->second != a.args.size())
      throw ParseError("arity mismatch for predicate '" + a.pred + "': first seen with " +
                           std::to_string(it->second) + " argument(s), now " +
                           std::to_string(a.args.size()),
                       name.line, name.col);
    return a;
  }

  AtomicConstraint comparison() {
    LinearTerm lhs = linear_term();
    Token rel = expect(Tok::Rel, "expected relation");
    LinearTerm rhs = linear_term();
    LinearTerm e = lhs - rhs;
    if (rel.text == "=") return {e, Rel::Eq};
    if (rel.text == "=<") return {e, Rel::Le};
    if (rel.text == "<") return {e, Rel::Lt};
    if (rel.text == ">=") return {rhs - lhs, Rel::Le};
    if (rel.text == ">") return {rhs - lhs, Rel::Lt};
    return {e, Rel::Ne};  // =\=
  }

  LinearTerm linear_term() {
    LinearTerm t;
    bool neg = false;
    if (cur_.kind == Tok::Minus) {
      neg = true;
      advance();
    } else if (cur_.kind == Tok::Plus) {
      advance();
    }
    t += addend(neg);
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      bool minus = cur_.kind == Tok::Minus;
      advance();
      t += addend(minus);
    }
    return t;
  }

  // One monomial: rational, variable, rational*variable or variable*rational.
  LinearTerm addend(bool negate) {
    Rat sign = negate ? Rat(-1) : Rat(1);
    if (cur_.kind == Tok::Number) {
      Rat k = rational();
      if (cur_.kind == Tok::Star) {
        advance();
        Token v = cur_;
        if (v.kind != Tok::Variable)
          throw ParseError("a '*' factor must multiply a constant and a variable (non-linear term?)",
                           v.line, v.col);
        advance();
        LinearTerm t = LinearTerm::var(v.text);
        t *= k * sign;
        return t;
      }
      return LinearTerm(k * sign);
    }
    if (cur_.kind == Tok::Variable) {
      Token v = cur_;
      advance();
      LinearTerm t = LinearTerm::var(v.text);
      if (cur_.kind == Tok::Star) {
        advance();
        if (cur_.kind != Tok::Number)
          throw ParseError("a '*' factor must multiply a constant and a variable (non-linear term?)",
                           cur_.line, cur_.col);
        Rat k = rational();
        t *= k;
      }
      t *= sign;
      return t;
    }
    throw ParseError("expected a number or variable", cur_.line, cur_.col);
  }

  Rat rational() {
    Token n = expect(Tok::Number, "expected number");
    Rat r{Int(n.text)};
    if (cur_.kind == Tok::Slash) {
      advance();
      Token d = expect(Tok::Number, "expected denominator");
      Int den(d.text);
      if (den == 0) throw ParseError("zero denominator", d.line, d.col);
      r /= Rat(den);
    }
    return r;
  }

  Token expect(Tok k, const std::string& msg) {
    if (cur_.kind != k) throw ParseError(msg, cur_.line, cur_.col);
    Token t = cur_;
    advance();
    return t;
  }

  void advance() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_{};
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text);
  return p.program();
}

Clause parse_clause(const std::string& text) {
  Program p = parse_program(text);
  if (p.clauses.size() != 1) throw ParseError("expected exactly one clause", 1, 1);
  return p.clauses.front();
}

LinearConstraint parse_constraint(const std::string& text) {
  Parser p(text);
  return p.constraint_only();
}

}  // namespace chc
