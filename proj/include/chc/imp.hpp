// Front-end for a small integer imperative language. Source programs are
// C-like functions plus a specification given in comment pragmas:
//
//   // pre:   m >= 0
//   // post:  sum >= m
//   // entry: sum = sum_upto(m);
//
// Two translations to clauses are provided. The big-step translation gives
// each function a predicate over its inputs and result and each loop a
// predicate over the live variables and the function result; the
// specification becomes a goal calling the entry function with the negated
// postcondition. The backward-reachability translation inlines the entry
// call and builds predicates that hold at a program point iff execution
// from that point can end in a state violating the postcondition; the goal
// asks whether such a point is reachable from a state satisfying the
// precondition. Both translations are satisfiable iff the triple is valid.

#pragma once

#include "chc/ast.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chc::imp {

struct ImpError : std::runtime_error {
  ImpError(const std::string& what, size_t line) : std::runtime_error(what), line(line) {}
  size_t line;
};

// Statements. Expressions are linear terms over source variable names;
// conditions are single comparisons.
struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind { Assign, Call, If, While, Return };
  Kind kind;
  size_t line = 0;
  std::string lhs;               // Assign, Call
  LinearTerm expr;               // Assign rhs, Return value
  std::string callee;            // Call
  std::vector<LinearTerm> args;  // Call
  AtomicConstraint cond;         // If, While
  std::vector<StmtPtr> then_body;  // If then-branch; While body
  std::vector<StmtPtr> else_body;  // If else-branch
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<StmtPtr> body;  // last statement is the single Return
  size_t line = 0;
};

// The pre/post/entry pragmas. pre and post are conjunctions over source
// variable names; a missing or "true" postcondition generates no goal.
struct Spec {
  LinearConstraint pre;
  std::vector<AtomicConstraint> post;
  bool post_true = true;
  std::optional<std::string> entry_lhs;
  std::string entry_fn;
  std::vector<LinearTerm> entry_args;

  bool has_entry() const { return entry_lhs.has_value(); }
};

struct SourceProgram {
  std::vector<Function> functions;
  Spec spec;
};

SourceProgram parse_source(const std::string& text);

// One predicate per function (inputs and result) and per loop (live
// variables and the enclosing function's result); the specification becomes
// one goal per negated postcondition conjunct.
Program translate_bigstep(const SourceProgram& s);

// Backward-reachability encoding of the entry call. The entry function body
// must be call-free.
Program translate_reach(const SourceProgram& s);

}  // namespace chc::imp
