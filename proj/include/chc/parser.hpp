// Parser for the clause file format:
//   clause := head (":-" body)? "."     head := "false" | atom
//   body items are atoms or comparisons over {=, =<, <, >=, >, =\=};
//   variables match [A-Z_][A-Za-z0-9_]*, predicates [a-z][A-Za-z0-9_]*,
//   % starts a comment, and "% mode: integer|rational" selects the domain.
#pragma once

#include "chc/ast.hpp"

#include <stdexcept>
#include <string>

namespace chc {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

Program parse_program(const std::string& text);

// Parses a single clause (convenience for tests and the history replayer).
Clause parse_clause(const std::string& text);

// Parses a comma-separated conjunction of comparisons.
LinearConstraint parse_constraint(const std::string& text);

}  // namespace chc
