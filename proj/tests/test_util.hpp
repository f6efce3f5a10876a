// Shared helpers for the test suites: parsing shorthands, deterministic
// random generators for constraints, and brute-force grid oracles.
#pragma once

#include "chc/ast.hpp"
#include "chc/linarith.hpp"
#include "chc/parser.hpp"
#include "chc/printer.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace test_util {

using namespace chc;

inline LinearConstraint pc(const std::string& s) { return parse_constraint(s); }
inline Clause pcl(const std::string& s) { return parse_clause(s); }
inline Program pp(const std::string& s) { return parse_program(s); }

// Exact truth of a conjunction at a total assignment.
inline bool holds_at(const LinearConstraint& c, const std::map<Var, Rat>& a) {
  for (const auto& atom : c.conjuncts) {
    Rat v = atom.expr.evaluate(a);
    bool ok = false;
    switch (atom.rel) {
      case Rel::Eq: ok = v == 0; break;
      case Rel::Le: ok = v <= 0; break;
      case Rel::Lt: ok = v < 0; break;
      case Rel::Ne: ok = v != 0; break;
    }
    if (!ok) return false;
  }
  return true;
}

// Enumerates all integer points of [-radius, radius]^|vars| and calls fn
// with each total assignment. fn returning false stops early.
template <typename Fn>
void for_each_grid_point(const std::vector<Var>& vars, int radius, Fn&& fn) {
  std::map<Var, Rat> a;
  std::vector<int> idx(vars.size(), -radius);
  for (;;) {
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = idx[i];
    if (!fn(a)) return;
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (idx[i] < radius) {
        ++idx[i];
        break;
      }
      idx[i] = -radius;
    }
    if (i == vars.size()) return;
  }
}

// Same grid scaled by 1/den (rational points with bounded denominator).
template <typename Fn>
void for_each_scaled_grid_point(const std::vector<Var>& vars, int radius, int den, Fn&& fn) {
  for_each_grid_point(vars, radius, [&](std::map<Var, Rat> a) {
    for (auto& [v, r] : a) r /= den;
    return fn(a);
  });
}

struct ConstraintGen {
  std::mt19937 rng;
  std::vector<Var> pool;
  int coeff_range = 3;
  int const_range = 6;
  bool allow_ne = true;
  bool allow_strict = true;

  explicit ConstraintGen(unsigned seed, std::vector<Var> vars = {"X", "Y"})
      : rng(seed), pool(std::move(vars)) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  AtomicConstraint atom() {
    LinearTerm t;
    bool nonzero = false;
    for (const auto& v : pool) {
      int k = uniform(-coeff_range, coeff_range);
      if (k != 0) {
        t += LinearTerm::var(v) * Rat(k);
        nonzero = true;
      }
    }
    if (!nonzero) t += LinearTerm::var(pool[(size_t)uniform(0, (int)pool.size() - 1)]);
    t += LinearTerm(Rat(uniform(-const_range, const_range)));
    Rel rel;
    switch (uniform(0, 5)) {
      case 0: rel = Rel::Eq; break;
      case 1: rel = allow_ne ? Rel::Ne : Rel::Le; break;
      case 2: rel = allow_strict ? Rel::Lt : Rel::Le; break;
      default: rel = Rel::Le; break;
    }
    return {t, rel};
  }

  LinearConstraint constraint(int min_atoms = 0, int max_atoms = 4) {
    LinearConstraint c;
    int n = uniform(min_atoms, max_atoms);
    for (int i = 0; i < n; ++i) c.add(atom());
    return c;
  }

  // The constraint conjoined with the bounding box [-radius, radius]^pool,
  // so grid enumeration over the box is a complete oracle.
  LinearConstraint boxed(const LinearConstraint& c, int radius) {
    LinearConstraint out = c;
    for (const auto& v : pool) {
      out.add({LinearTerm::var(v) - LinearTerm(Rat(radius)), Rel::Le});
      out.add({-LinearTerm::var(v) - LinearTerm(Rat(radius)), Rel::Le});
    }
    return out;
  }
};

// Random linear term over the generator pool, small coefficients.
inline LinearTerm rand_term(ConstraintGen& g) {
  LinearTerm t;
  for (const auto& v : g.pool) {
    int k = g.uniform(-2, 2);
    if (k != 0) t += LinearTerm::var(v) * Rat(k);
  }
  t += LinearTerm(Rat(g.uniform(-2, 2)));
  return t;
}

// Two-layer recursion-free program: unary a, unary b depending on a, one
// goal on b. Every clause is boxed so grid enumeration is complete.
inline Program make_layered(ConstraintGen& g, DomainMode mode, int radius) {
  Program p;
  p.mode = mode;
  int nbase = g.uniform(1, 2);
  int nmid = g.uniform(1, 2);
  for (int i = 0; i < nbase; ++i) {
    Clause c;
    c.head = Atom{"a", {rand_term(g)}};
    c.constr = g.boxed(g.constraint(0, 2), radius);
    p.clauses.push_back(std::move(c));
  }
  for (int i = 0; i < nmid; ++i) {
    Clause c;
    c.head = Atom{"b", {rand_term(g)}};
    c.body = {Atom{"a", {rand_term(g)}}};
    c.constr = g.boxed(g.constraint(0, 2), radius);
    p.clauses.push_back(std::move(c));
  }
  Clause goal;
  goal.body = {Atom{"b", {rand_term(g)}}};
  goal.constr = g.boxed(g.constraint(0, 1), radius);
  p.clauses.push_back(std::move(goal));
  return p;
}

// Ground extension of a unary predicate by grid enumeration, given the
// extensions of the predicates it depends on.
inline std::set<Rat> oracle_extension(const Program& p, const std::string& pred,
                                      const std::map<std::string, std::set<Rat>>& lower,
                                      int radius, int den) {
  std::set<Rat> out;
  for (const Clause& cl : p.clauses) {
    if (!cl.head || cl.head->pred != pred) continue;
    VarSet cvs = cl.vars();
    std::vector<Var> vs(cvs.begin(), cvs.end());
    auto visit = [&](const std::map<Var, Rat>& a) {
      if (!holds_at(cl.constr, a)) return true;
      for (const Atom& b : cl.body)
        if (!lower.count(b.pred) || lower.at(b.pred).count(b.args[0].evaluate(a)) == 0)
          return true;
      out.insert(cl.head->args[0].evaluate(a));
      return true;
    };
    if (den == 1)
      for_each_grid_point(vs, radius, visit);
    else
      for_each_scaled_grid_point(vs, radius * den, den, visit);
  }
  return out;
}

inline bool oracle_goal_fires(const Program& p, const std::map<std::string, std::set<Rat>>& ext,
                              int radius, int den) {
  bool fires = false;
  for (const Clause& cl : p.clauses) {
    if (!cl.is_goal()) continue;
    VarSet cvs = cl.vars();
    std::vector<Var> vs(cvs.begin(), cvs.end());
    auto visit = [&](const std::map<Var, Rat>& a) {
      if (!holds_at(cl.constr, a)) return true;
      for (const Atom& b : cl.body)
        if (!ext.count(b.pred) || ext.at(b.pred).count(b.args[0].evaluate(a)) == 0) return true;
      fires = true;
      return false;
    };
    if (den == 1)
      for_each_grid_point(vs, radius, visit);
    else
      for_each_scaled_grid_point(vs, radius * den, den, visit);
    if (fires) return true;
  }
  return false;
}

}  // namespace test_util
