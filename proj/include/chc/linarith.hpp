// Decision procedures for conjunctions of linear constraints over exact
// rationals, with an integer mode layered on top via tightening and
// branch-and-bound. No floating point anywhere.
#pragma once

#include "chc/ast.hpp"

#include <optional>

namespace chc {

enum class Verdict3 { Sat, Unsat, Unknown };

const char* to_string(Verdict3 v);

using SamplePoint = std::map<Var, Rat>;

struct SolveResult {
  Verdict3 verdict{Verdict3::Unknown};
  std::optional<SamplePoint> sample;  // present iff verdict == Sat
};

struct SolverBudget {
  // Maximum branch-and-bound nodes in integer mode.
  int branch_nodes = 64;
  // Maximum number of =\= conjuncts case-split at once (2^n disjuncts).
  int max_disequalities = 12;
};

// Satisfiability of c in the given mode. Rational mode is decided exactly
// by Fourier-Motzkin; integer mode tightens to integer bounds and runs
// branch-and-bound, answering Unknown when the node budget is exhausted.
SolveResult solv(const LinearConstraint& c, DomainMode mode, const SolverBudget& budget = {});

// Exact rational entailment: every rational point of c1 satisfies c2.
bool entail(const LinearConstraint& c1, const LinearConstraint& c2);

// Mutual entailment.
bool equivalent(const LinearConstraint& c1, const LinearConstraint& c2);

// Projection onto `keep`: Fourier-Motzkin elimination of all other
// variables, always over the rationals. Equivalent to the existential
// quantification over the rationals, except that =\= conjuncts mentioning
// eliminated variables are dropped (an over-approximation).
LinearConstraint proj(const LinearConstraint& c, const VarSet& keep);

// Closure of the convex union, via the lifted-variable encoding plus
// projection. Strict conjuncts are closed and =\= conjuncts dropped; an
// unsatisfiable operand yields the other operand.
LinearConstraint convex_hull(const LinearConstraint& c1, const LinearConstraint& c2);

// Standard polyhedral widening: keeps the conjuncts of c1 entailed by c2.
// Equalities of c1 are first split into pairs of inequalities; =\=
// conjuncts are dropped.
LinearConstraint widen(const LinearConstraint& c1, const LinearConstraint& c2);

// Removes duplicates and conjuncts entailed by the remaining ones
// (left-to-right single scan); detects ground falsity.
LinearConstraint simplify(const LinearConstraint& c);

// Case-splits every =\= conjunct into < and >; returns the 2^k resulting
// disequality-free conjunctions (unfiltered).
std::vector<LinearConstraint> split_disequalities(const LinearConstraint& c);

// Integer tightening: scales conjuncts to coprime integer coefficients,
// rounds constants to the nearest integer bound, turns strict inequalities
// into non-strict ones, and detects divisibility conflicts in equalities.
// Sound and complete over the integers.
LinearConstraint integer_tighten(const LinearConstraint& c);

// Equivalence in the given mode (integer mode compares tightened forms).
bool equivalent_mode(const LinearConstraint& c1, const LinearConstraint& c2, DomainMode mode);

}  // namespace chc
