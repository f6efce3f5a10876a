// Core syntax: linear terms, atomic constraints, conjunctions, atoms, clauses
// and programs over linear rational or integer arithmetic.
#pragma once

#include "chc/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chc {

using Var = std::string;
using VarSet = std::set<Var>;

// A linear term: sum of coefficient*variable monomials plus a constant.
// Invariant: no zero coefficients are stored; map order is the canonical
// monomial order.
struct LinearTerm {
  std::map<Var, Rat> coeffs;
  Rat constant{0};

  LinearTerm() = default;
  explicit LinearTerm(Rat c) : constant(std::move(c)) {}
  static LinearTerm var(const Var& v) {
    LinearTerm t;
    t.coeffs[v] = 1;
    return t;
  }

  bool is_constant() const { return coeffs.empty(); }
  bool is_zero() const { return coeffs.empty() && constant == 0; }
  // Returns the variable if the term is exactly one variable with
  // coefficient 1 and no constant.
  std::optional<Var> as_var() const {
    if (constant == 0 && coeffs.size() == 1 && coeffs.begin()->second == 1)
      return coeffs.begin()->first;
    return std::nullopt;
  }
  Rat coeff(const Var& v) const {
    auto it = coeffs.find(v);
    return it == coeffs.end() ? Rat(0) : it->second;
  }

  LinearTerm& operator+=(const LinearTerm& o);
  LinearTerm& operator-=(const LinearTerm& o);
  LinearTerm& operator*=(const Rat& k);
  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) { return a -= b; }
  friend LinearTerm operator*(LinearTerm a, const Rat& k) { return a *= k; }
  friend LinearTerm operator-(LinearTerm a) { return a *= Rat(-1); }
  bool operator==(const LinearTerm& o) const = default;
  auto operator<=>(const LinearTerm& o) const = default;

  void collect_vars(VarSet& out) const;
  VarSet vars() const;
  // Substitutes variables by terms (simultaneous).
  LinearTerm substituted(const std::map<Var, LinearTerm>& sub) const;
  // Evaluates under a total assignment of the term's variables.
  Rat evaluate(const std::map<Var, Rat>& assign) const;
};

// Relation of an atomic constraint, normalised to "term REL 0".
// >= and > from the surface syntax are stored flipped into Le/Lt.
enum class Rel { Eq, Le, Lt, Ne };

struct AtomicConstraint {
  LinearTerm expr;  // expr REL 0
  Rel rel{Rel::Eq};

  AtomicConstraint() = default;
  AtomicConstraint(LinearTerm e, Rel r) : expr(std::move(e)), rel(r) {}
  bool operator==(const AtomicConstraint& o) const = default;
  auto operator<=>(const AtomicConstraint& o) const = default;

  // Ground truth value if the expression is constant.
  std::optional<bool> ground_value() const;
  // Scales so that variable coefficients are coprime integers with a
  // canonical sign (equalities and disequalities get a positive leading
  // coefficient).
  AtomicConstraint normalised() const;
  AtomicConstraint substituted(const std::map<Var, LinearTerm>& sub) const;
};

// Conjunction of atomic constraints. Empty conjunction is true; the
// canonical unsatisfiable marker is the single conjunct 1 = 0.
struct LinearConstraint {
  std::vector<AtomicConstraint> conjuncts;

  LinearConstraint() = default;
  explicit LinearConstraint(std::vector<AtomicConstraint> cs) : conjuncts(std::move(cs)) {}
  static LinearConstraint top() { return LinearConstraint{}; }
  static LinearConstraint falsum();
  bool is_top() const { return conjuncts.empty(); }
  // Syntactic check for the falsum marker / a ground-false conjunct.
  bool has_ground_false() const;
  bool operator==(const LinearConstraint& o) const = default;

  LinearConstraint& operator&=(const LinearConstraint& o);
  friend LinearConstraint operator&(LinearConstraint a, const LinearConstraint& b) { return a &= b; }
  void add(AtomicConstraint a) { conjuncts.push_back(std::move(a)); }

  void collect_vars(VarSet& out) const;
  VarSet vars() const;
  LinearConstraint substituted(const std::map<Var, LinearTerm>& sub) const;
};

struct Atom {
  std::string pred;
  std::vector<LinearTerm> args;

  Atom() = default;
  Atom(std::string p, std::vector<LinearTerm> a) : pred(std::move(p)), args(std::move(a)) {}
  size_t arity() const { return args.size(); }
  bool operator==(const Atom& o) const = default;

  void collect_vars(VarSet& out) const;
  VarSet vars() const;
  Atom substituted(const std::map<Var, LinearTerm>& sub) const;
};

// head = nullopt encodes the goal head `false`.
struct Clause {
  std::optional<Atom> head;
  LinearConstraint constr;
  std::vector<Atom> body;

  bool is_goal() const { return !head.has_value(); }
  bool is_fact() const { return head.has_value() && body.empty(); }
  bool operator==(const Clause& o) const = default;

  VarSet vars() const;
  VarSet head_vars() const;
  // Variables occurring in head or body atoms (the clause interface;
  // everything else is clause-local).
  VarSet interface_vars() const;
  Clause substituted(const std::map<Var, LinearTerm>& sub) const;
};

enum class DomainMode { Rational, Integer };

struct Program {
  std::vector<Clause> clauses;
  DomainMode mode{DomainMode::Integer};

  std::set<std::string> predicates() const;
  // Predicates occurring in at least one non-goal head.
  std::set<std::string> defined_predicates() const;
  std::vector<const Clause*> clauses_for(const std::string& pred) const;
};

// Renames the clause's variables apart from `avoid` using fresh names based
// on the original ones (X, X_1, X_2, ...).
Clause rename_apart(const Clause& c, const VarSet& avoid);

// Fresh variable not in `avoid`, derived from `base`.
Var fresh_var(const Var& base, VarSet& avoid);

// depends-on: transitive closure of the immediately-depends-on relation
// (head predicate -> body predicates). The goal head is keyed as "false".
std::map<std::string, std::set<std::string>> dependency_relation(const Program& p);

inline const std::string kFalseHead = "false";

}  // namespace chc
