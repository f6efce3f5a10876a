// Solver, entailment, projection, hull, widening, simplification and
// integer tightening, validated against brute-force grid oracles and
// pointwise certificates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <algorithm>

using namespace chc;
using namespace test_util;

namespace {

// Test-local negation, kept independent of the library internals.
std::vector<AtomicConstraint> local_negate(const AtomicConstraint& a) {
  switch (a.rel) {
    case Rel::Eq: return {{a.expr, Rel::Lt}, {-a.expr, Rel::Lt}};
    case Rel::Le: return {{-a.expr, Rel::Lt}};
    case Rel::Lt: return {{-a.expr, Rel::Le}};
    case Rel::Ne: return {{a.expr, Rel::Eq}};
  }
  return {};
}

bool grid_has_point(const LinearConstraint& c, const std::vector<Var>& vars, int radius) {
  bool found = false;
  for_each_grid_point(vars, radius, [&](const std::map<Var, Rat>& p) {
    if (holds_at(c, p)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace

TEST_CASE("solv decides simple rational systems") {
  CHECK(solv(pc("X >= 0, X =< 0"), DomainMode::Rational).verdict == Verdict3::Sat);
  CHECK(solv(pc("X < X"), DomainMode::Rational).verdict == Verdict3::Unsat);
  CHECK(solv(pc("X > 0, X < 1"), DomainMode::Rational).verdict == Verdict3::Sat);
  CHECK(solv(pc("X > 0, X < 1"), DomainMode::Integer).verdict == Verdict3::Unsat);
  CHECK(solv(LinearConstraint::top(), DomainMode::Rational).verdict == Verdict3::Sat);
  CHECK(solv(LinearConstraint::falsum(), DomainMode::Integer).verdict == Verdict3::Unsat);

  SolveResult r = solv(pc("X >= 0, X =\\= 0"), DomainMode::Integer);
  REQUIRE(r.verdict == Verdict3::Sat);
  CHECK(holds_at(pc("X >= 0, X =\\= 0"), *r.sample));

  // Samples cover every variable of the constraint, bounded or not.
  SolveResult f = solv(pc("X >= Z, Y >= 2"), DomainMode::Rational);
  REQUIRE(f.verdict == Verdict3::Sat);
  CHECK(f.sample->count("X") == 1);
  CHECK(f.sample->count("Y") == 1);
  CHECK(f.sample->count("Z") == 1);
  CHECK(holds_at(pc("X >= Z, Y >= 2"), *f.sample));
}

TEST_CASE("integer mode finds parity and divisibility conflicts") {
  CHECK(solv(pc("2*X = 1"), DomainMode::Integer).verdict == Verdict3::Unsat);
  CHECK(solv(pc("2*X = 1"), DomainMode::Rational).verdict == Verdict3::Sat);
  CHECK(solv(pc("3*X + 3*Y = 7"), DomainMode::Integer).verdict == Verdict3::Unsat);
  // The conflict only appears after eliminating Y.
  CHECK(solv(pc("2*X = Y, Y = 2*Z + 1"), DomainMode::Integer).verdict == Verdict3::Unsat);
  CHECK(solv(pc("2*X = Y, Y = 2*Z + 1"), DomainMode::Rational).verdict == Verdict3::Sat);
}

TEST_CASE("branch and bound respects its node budget") {
  // Unique rational point (1/2, 1/2): killed without any branching.
  CHECK(solv(pc("X + Y = 1, X - Y = 0"), DomainMode::Integer).verdict == Verdict3::Unsat);
  // No unit pivots anywhere, so the divisibility conflict stays hidden and
  // branch-and-bound descends forever; the budget turns that into Unknown.
  LinearConstraint c = pc("2*X = 3*Y, 3*Y = 2*Z + 1");
  SolverBudget tiny;
  tiny.branch_nodes = 2;
  CHECK(solv(c, DomainMode::Integer, tiny).verdict == Verdict3::Unknown);
  CHECK(solv(c, DomainMode::Integer).verdict != Verdict3::Sat);
  CHECK(solv(c, DomainMode::Rational).verdict == Verdict3::Sat);
  SolverBudget zero;
  zero.branch_nodes = 0;
  CHECK(solv(pc("X >= 0"), DomainMode::Integer, zero).verdict == Verdict3::Unknown);
  // Too many disequalities to case-split.
  LinearConstraint many;
  for (int i = 0; i < 20; ++i) {
    many.add({LinearTerm::var("X") - LinearTerm(Rat(i)), Rel::Ne});
  }
  CHECK(solv(many, DomainMode::Rational).verdict == Verdict3::Unknown);
}

TEST_CASE("entailment basics") {
  CHECK(entail(pc("X = 1"), pc("X > 0")));
  CHECK(!entail(pc("X > 0"), pc("X >= 2")));
  CHECK(entail(pc("X = 1, Y = 1"), pc("X + Y = 2")));
  CHECK(entail(LinearConstraint::falsum(), pc("X = 5")));
  CHECK(entail(pc("X = 5"), LinearConstraint::top()));
  CHECK(entail(pc("X >= 1"), pc("X =\\= 0")));
  CHECK(entail(pc("X =\\= 0, X >= 0"), pc("X > 0")));
  CHECK(!entail(pc("X >= 0"), pc("X =\\= 0")));
  CHECK(equivalent(pc("X >= 0, X =< 0"), pc("X = 0")));
  CHECK(!equivalent(pc("X > 0"), pc("X >= 1")));         // rationals
  CHECK(equivalent_mode(pc("X > 0"), pc("X >= 1"), DomainMode::Integer));
  CHECK(!equivalent_mode(pc("X > 0"), pc("X >= 1"), DomainMode::Rational));
}

TEST_CASE("projection matches hand-computed results") {
  // Eliminating the pre-state of one loop iteration from the initial store.
  LinearConstraint c = pc("X = 0, Y = 0, X < N, X1 = X + 1, Y1 = X1 + Y");
  LinearConstraint p = proj(c, {"X1", "Y1", "N"});
  CHECK(equivalent(p, pc("0 < N, X1 = 1, Y1 = 1")));
  for (const Var& v : p.vars()) CHECK(VarSet{"X1", "Y1", "N"}.count(v) == 1);

  CHECK(proj(pc("X < X"), VarSet{}).has_ground_false());
  CHECK(proj(pc("X >= 0"), VarSet{}).is_top());
  CHECK(equivalent(proj(pc("X =\\= Y, X >= Z"), {"X", "Y"}), pc("X =\\= Y")));
  CHECK(proj(pc("X =\\= Z"), {"X"}).is_top());
  // Projection of an unsatisfiable constraint stays unsatisfiable.
  LinearConstraint u = proj(pc("X =< Y, Y =< Z, Z =< X, X = 0, Z = 1"), {"X"});
  CHECK(solv(u, DomainMode::Rational).verdict == Verdict3::Unsat);
}

TEST_CASE("convex hull matches hand-computed results") {
  LinearConstraint h = convex_hull(pc("X =< 0, R = R1"), pc("0 < X, X =< 1, R = R1 + X"));
  CHECK(equivalent(h, pc("X =< 1, R >= R1, R >= X + R1, R =< R1 + 1")));
  // Strict operands are closed.
  CHECK(!entail(h, pc("X < 1")));
  // An unsatisfiable operand contributes nothing.
  LinearConstraint g = convex_hull(LinearConstraint::falsum(), pc("X = 3"));
  CHECK(equivalent(g, pc("X = 3")));
  CHECK(equivalent(convex_hull(pc("X = 3"), pc("1 = 0")), pc("X = 3")));
  // Hull of two points is the segment.
  LinearConstraint seg = convex_hull(pc("X = 0, Y = 0"), pc("X = 2, Y = 2"));
  CHECK(equivalent(seg, pc("X >= 0, X =< 2, X = Y")));
  // Unbounded operands keep their recession directions.
  LinearConstraint ray = convex_hull(pc("X >= 1, Y = 0"), pc("X = 0, Y = 0"));
  CHECK(equivalent(ray, pc("X >= 0, Y = 0")));
}

TEST_CASE("widening keeps the stable conjuncts") {
  LinearConstraint w = widen(pc("X >= 0, X =< 0, Y >= 0, Y =< 0"), pc("0 < N, X = 1, Y = 1"));
  CHECK(equivalent(w, pc("X >= 0, Y >= 0")));
  CHECK(!entail(w, pc("X =< 0")));
  // Equalities are split before filtering.
  LinearConstraint w2 = widen(pc("X = 0"), pc("X = 1"));
  CHECK(equivalent(w2, pc("X >= 0")));
  CHECK(widen(pc("X = 0"), pc("X = -1")).conjuncts.size() == 1);
  CHECK(widen(LinearConstraint::top(), pc("X = 0")).is_top());
}

TEST_CASE("simplification removes redundant conjuncts") {
  LinearConstraint s = simplify(pc("X >= 0, X >= 1"));
  CHECK(s.conjuncts.size() == 1);
  CHECK(equivalent(s, pc("X >= 1")));
  CHECK(simplify(pc("X = 1, X >= 0, X =< 2")).conjuncts.size() == 1);
  CHECK(simplify(pc("X < X")).has_ground_false());
  CHECK(simplify(pc("0 = 0, 1 >= 0")).is_top());
  LinearConstraint dup = simplify(pc("X >= 0, X >= 0, X >= 0"));
  CHECK(dup.conjuncts.size() == 1);
}

TEST_CASE("integer tightening unit cases") {
  CHECK(equivalent(integer_tighten(pc("X > 0")), pc("X >= 1")));
  CHECK(integer_tighten(pc("2*X = 1")).has_ground_false());
  CHECK(integer_tighten(pc("2*X =\\= 1")).is_top());
  CHECK(equivalent(integer_tighten(pc("2*X < 3")), pc("X =< 1")));
  CHECK(equivalent(integer_tighten(pc("3*X >= 2")), pc("X >= 1")));
  for (const auto& a : integer_tighten(pc("X > 0, X < 5, 2*Y =< 7")).conjuncts)
    CHECK(a.rel != Rel::Lt);
}

TEST_CASE("disequality splitting") {
  LinearConstraint c = pc("X >= 0, X =\\= 1, Y =\\= 0");
  auto ds = split_disequalities(c);
  REQUIRE(ds.size() == 4);
  for (const auto& d : ds)
    for (const auto& a : d.conjuncts) CHECK(a.rel != Rel::Ne);
  for_each_scaled_grid_point({"X", "Y"}, 6, 2, [&](const std::map<Var, Rat>& p) {
    bool any = std::any_of(ds.begin(), ds.end(), [&](const LinearConstraint& d) { return holds_at(d, p); });
    CHECK(any == holds_at(c, p));
    return true;
  });
}

TEST_CASE("property: integer solv agrees with the grid oracle") {
  ConstraintGen gen(101, {"X", "Y"});
  SolverBudget big;
  big.branch_nodes = 20000;
  const int radius = 4;
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.boxed(gen.constraint(), radius);
    bool oracle = grid_has_point(c, gen.pool, radius);
    SolveResult r = solv(c, DomainMode::Integer, big);
    CAPTURE(to_string(c));
    REQUIRE(r.verdict != Verdict3::Unknown);
    CHECK((r.verdict == Verdict3::Sat) == oracle);
    if (r.verdict == Verdict3::Sat) {
      CHECK(holds_at(c, *r.sample));
      for (const auto& [v, val] : *r.sample) CHECK(is_integer(val));
    }
  }
}

TEST_CASE("property: rational solv certificates and grid implication") {
  ConstraintGen gen(202, {"X", "Y", "Z"});
  const int radius = 2;
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.boxed(gen.constraint(), radius);
    SolveResult r = solv(c, DomainMode::Rational);
    CAPTURE(to_string(c));
    REQUIRE(r.verdict != Verdict3::Unknown);
    if (r.verdict == Verdict3::Sat) {
      CHECK(holds_at(c, *r.sample));
    } else {
      // Rationally unsatisfiable, so in particular no integer grid point.
      CHECK(!grid_has_point(c, gen.pool, radius));
    }
  }
}

TEST_CASE("property: entailment certificates") {
  ConstraintGen gen(303, {"X", "Y"});
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c1 = gen.boxed(gen.constraint(0, 3), 4);
    LinearConstraint c2 = gen.constraint(1, 2);
    bool e = entail(c1, c2);
    CAPTURE(to_string(c1));
    CAPTURE(to_string(c2));
    if (e) {
      // Every point of c1 on the half-integer grid must satisfy c2.
      for_each_scaled_grid_point(gen.pool, 6, 2, [&](const std::map<Var, Rat>& p) {
        if (holds_at(c1, p)) CHECK(holds_at(c2, p));
        return true;
      });
    } else {
      // There must be a verifiable counterexample point.
      bool witnessed = false;
      for (const auto& a : c2.conjuncts) {
        for (const auto& n : local_negate(a)) {
          LinearConstraint q = c1;
          q.add(n);
          SolveResult r = solv(q, DomainMode::Rational);
          if (r.verdict == Verdict3::Sat && holds_at(c1, *r.sample) && !holds_at(c2, *r.sample)) {
            witnessed = true;
            break;
          }
        }
        if (witnessed) break;
      }
      CHECK(witnessed);
    }
  }
}

TEST_CASE("property: projection is the exact shadow without disequalities") {
  ConstraintGen gen(404, {"X", "Y", "Z"});
  gen.allow_ne = false;
  const int radius = 2;
  const VarSet keep{"X", "Y"};
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.boxed(gen.constraint(1, 3), radius);
    LinearConstraint p = proj(c, keep);
    CAPTURE(to_string(c));
    CAPTURE(to_string(p));
    for (const Var& v : p.vars()) CHECK(keep.count(v) == 1);
    // Soundness: the shadow of any point of c satisfies p.
    for_each_grid_point(gen.pool, radius, [&](const std::map<Var, Rat>& q) {
      if (holds_at(c, q)) {
        std::map<Var, Rat> shadow{{"X", q.at("X")}, {"Y", q.at("Y")}};
        CHECK(holds_at(p, shadow));
      }
      return true;
    });
    // Completeness: any grid point of p extends to a rational point of c
    // (checked on a handful of points per case to keep the suite fast).
    int checked = 0;
    for_each_grid_point({"X", "Y"}, radius, [&](const std::map<Var, Rat>& q) {
      if (!holds_at(p, q)) return true;
      LinearConstraint fixed = c;
      for (const auto& [v, val] : q)
        fixed.add({LinearTerm::var(v) - LinearTerm(val), Rel::Eq});
      CHECK(solv(fixed, DomainMode::Rational).verdict == Verdict3::Sat);
      return ++checked < 8;
    });
  }
}

TEST_CASE("property: projection soundness with disequalities") {
  ConstraintGen gen(505, {"X", "Y", "Z"});
  const int radius = 2;
  const VarSet keep{"X", "Y"};
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.constraint(1, 4);
    LinearConstraint p = proj(c, keep);
    for_each_grid_point(gen.pool, radius, [&](const std::map<Var, Rat>& q) {
      if (holds_at(c, q)) {
        std::map<Var, Rat> shadow{{"X", q.at("X")}, {"Y", q.at("Y")}};
        CHECK(holds_at(p, shadow));
      }
      return true;
    });
  }
}

TEST_CASE("property: convex hull is a commutative upper bound") {
  ConstraintGen gen(606, {"X", "Y"});
  gen.allow_ne = false;
  const int radius = 3;
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c1 = gen.boxed(gen.constraint(1, 3), radius);
    LinearConstraint c2 = gen.boxed(gen.constraint(1, 3), radius);
    LinearConstraint h = convex_hull(c1, c2);
    CAPTURE(to_string(c1));
    CAPTURE(to_string(c2));
    CAPTURE(to_string(h));
    CHECK(entail(c1, h));
    CHECK(entail(c2, h));
    CHECK(equivalent(h, convex_hull(c2, c1)));
    // Points of either operand land in the hull.
    for_each_grid_point(gen.pool, radius, [&](const std::map<Var, Rat>& p) {
      if (holds_at(c1, p) || holds_at(c2, p)) CHECK(holds_at(h, p));
      return true;
    });
  }
}

TEST_CASE("property: hull of a satisfiable set with itself is its closure") {
  ConstraintGen gen(707, {"X", "Y"});
  gen.allow_ne = false;
  for (int i = 0; i < 500; ++i) {
    LinearConstraint c = gen.boxed(gen.constraint(1, 3), 4);
    if (solv(c, DomainMode::Rational).verdict != Verdict3::Sat) continue;
    LinearConstraint closed = c;
    for (auto& a : closed.conjuncts)
      if (a.rel == Rel::Lt) a.rel = Rel::Le;
    CHECK(equivalent(convex_hull(c, c), closed));
  }
}

TEST_CASE("property: widening is an upper bound and stabilises") {
  ConstraintGen gen(808, {"X", "Y"});
  gen.allow_ne = false;
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c1 = gen.constraint(1, 4);
    LinearConstraint c2 = gen.constraint(0, 3);
    LinearConstraint w = widen(c1, c2);
    CAPTURE(to_string(c1));
    CAPTURE(to_string(c2));
    CHECK(entail(c1, w));
    CHECK(entail(c2, w));
    // Widening again with the same operand changes nothing.
    LinearConstraint w2 = widen(w, c2);
    CHECK(to_string(w2) == to_string(w));
    // Iterated widening only ever drops conjuncts.
    LinearConstraint cur = w;
    size_t sz = cur.conjuncts.size();
    for (int k = 0; k < 4; ++k) {
      cur = widen(cur, gen.constraint(0, 2));
      CHECK(cur.conjuncts.size() <= sz);
      sz = cur.conjuncts.size();
    }
  }
}

TEST_CASE("property: simplify preserves meaning and is idempotent") {
  ConstraintGen gen(909, {"X", "Y"});
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.constraint(0, 5);
    LinearConstraint s = simplify(c);
    CAPTURE(to_string(c));
    CAPTURE(to_string(s));
    CHECK(equivalent(c, s));
    CHECK(to_string(simplify(s)) == to_string(s));
    CHECK(s.conjuncts.size() <= std::max<size_t>(c.conjuncts.size(), 1));
  }
}

TEST_CASE("property: integer tightening preserves integer points exactly") {
  ConstraintGen gen(111, {"X", "Y"});
  const int radius = 6;
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.constraint(1, 4);
    LinearConstraint t = integer_tighten(c);
    CAPTURE(to_string(c));
    CAPTURE(to_string(t));
    for (const auto& a : t.conjuncts) CHECK(a.rel != Rel::Lt);
    for_each_grid_point(gen.pool, radius, [&](const std::map<Var, Rat>& p) {
      CHECK(holds_at(c, p) == holds_at(t, p));
      return true;
    });
  }
}

TEST_CASE("property: disequality splitting covers exactly the original set") {
  ConstraintGen gen(222, {"X", "Y"});
  for (int i = 0; i < 1000; ++i) {
    LinearConstraint c = gen.constraint(0, 4);
    auto ds = split_disequalities(c);
    size_t nes = 0;
    for (const auto& a : c.conjuncts)
      if (a.rel == Rel::Ne) ++nes;
    CHECK(ds.size() == (size_t{1} << nes));
    for_each_scaled_grid_point(gen.pool, 4, 2, [&](const std::map<Var, Rat>& p) {
      bool any = std::any_of(ds.begin(), ds.end(), [&](const LinearConstraint& d) { return holds_at(d, p); });
      CHECK(any == holds_at(c, p));
      return true;
    });
  }
}
