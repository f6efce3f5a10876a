// Pretty printer. parse(print(p)) is structurally identical to p after one
// normalisation round trip: print(parse(print(p))) == print(p).
#pragma once

#include "chc/ast.hpp"

#include <string>

namespace chc {

std::string to_string(const LinearTerm& t);
std::string to_string(const AtomicConstraint& a);
std::string to_string(const LinearConstraint& c);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);
std::string print_program(const Program& p);

}  // namespace chc
