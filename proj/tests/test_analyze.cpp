#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chc/analyze.hpp"
#include "chc/eval.hpp"
#include "chc/printer.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace chc;
using namespace test_util;

namespace {

// Parses a constraint over the given names and renames the i-th onto the
// canonical fact argument variable $i, for comparing against model entries.
LinearConstraint over_args(const std::string& s, const std::vector<Var>& names) {
  std::map<Var, LinearTerm> ren;
  std::vector<Var> fa = fact_args(names.size());
  for (size_t i = 0; i < names.size(); ++i) ren[names[i]] = LinearTerm::var(fa[i]);
  return pc(s).substituted(ren);
}

std::vector<Clause> goals_of(const Program& p) {
  std::vector<Clause> gs;
  for (const Clause& cl : p.clauses)
    if (cl.is_goal()) gs.push_back(cl);
  return gs;
}

Program definite_part(const Program& p) {
  Program q;
  q.mode = p.mode;
  for (const Clause& cl : p.clauses)
    if (!cl.is_goal()) q.clauses.push_back(cl);
  return q;
}

bool model_reaches(const AnalysisResult& r, const std::string& pred,
                   const LinearConstraint& expect) {
  auto it = r.model.preds.find(pred);
  if (it == r.model.preds.end() || !it->second.constr) return false;
  return equivalent(*it->second.constr, expect);
}

bool models_equivalent(const PolyModel& a, const PolyModel& b) {
  if (a.preds.size() != b.preds.size()) return false;
  for (const auto& [pred, pa] : a.preds) {
    auto it = b.preds.find(pred);
    if (it == b.preds.end()) return false;
    if (pa.constr.has_value() != it->second.constr.has_value()) return false;
    if (pa.constr && !equivalent(*pa.constr, *it->second.constr)) return false;
  }
  return true;
}

AtomicConstraint negate_atom(const AtomicConstraint& a) {
  switch (a.rel) {
    case Rel::Le: return {-a.expr, Rel::Lt};
    case Rel::Lt: return {-a.expr, Rel::Le};
    case Rel::Eq: return {a.expr, Rel::Ne};
    default: return {a.expr, Rel::Eq};
  }
}

// Is every point of `f` (of the mode's domain) inside `c`? Rational
// entailment first; over the integers fall back to refuting each negated
// conjunct, which also covers facts that are only rationally wider.
bool subsumed_in_mode(const LinearConstraint& f, const LinearConstraint& c, DomainMode mode) {
  if (entail(f, c)) return true;
  if (mode == DomainMode::Rational) return false;
  LinearConstraint tf = integer_tighten(f);
  if (tf.has_ground_false() || entail(tf, c)) return true;
  for (const auto& a : c.conjuncts) {
    LinearConstraint bad = tf;
    bad.add(negate_atom(a));
    if (solv(bad, DomainMode::Integer).verdict != Verdict3::Unsat) return false;
  }
  return true;
}

// Every fact ever derived (live or not) lies inside the abstract model.
void check_arena_subsumed(const Interpretation& interp, const PolyModel& m, DomainMode mode) {
  for (const Fact& f : interp.arena) {
    if (f.pred == kFalseHead) continue;
    auto it = m.preds.find(f.pred);
    REQUIRE(it != m.preds.end());
    REQUIRE(it->second.constr.has_value());
    CHECK(subsumed_in_mode(f.constr, *it->second.constr, mode));
  }
}

const char* kSumUpto = R"(
false :- M > Sum, M >= 0, sum_upto(M, Sum).
sum_upto(X, R) :- R0 = 0, while(X, R0, R).
while(X1, R1, R) :- X1 > 0, R2 = R1 + X1, X2 = X1 - 1, while(X2, R2, R).
while(X1, R1, R) :- X1 =< 0, R = R1.
)";

const char* kCountLoop = R"(
p(X) :- X = 0.
p(Y) :- Y = X + 1, X =< 2, p(X).
false :- X >= 5, p(X).
)";

}  // namespace

TEST_CASE("polyhedral analysis of the summation conditions") {
  Program p = pp(kSumUpto);
  AnalysisResult r = cpa_lfp(p);

  // The loop stabilises after the widening discards the growing upper bound
  // on its first argument; the wrapper then needs a single pass.
  CHECK(r.stable);
  CHECK(r.iterations == 4);
  CHECK(model_reaches(r, "while", over_args("R >= R1, R >= X + R1", {"X", "R1", "R"})));
  CHECK(model_reaches(r, "sum_upto", over_args("R >= X, R >= 0", {"X", "R"})));

  auto verdicts = check_goals(r.model, goals_of(p), p.mode);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0] == Verdict3::Sat);
  CHECK(check_model(p, r.model));

  // The same fixpoint is reached over the rationals.
  Program q = p;
  q.mode = DomainMode::Rational;
  AnalysisResult rq = cpa_lfp(q);
  CHECK(rq.stable);
  CHECK(models_equivalent(r.model, rq.model));
}

TEST_CASE("a single fact stabilises in one pass") {
  Program p = pp("p(X) :- X = 0.");
  AnalysisResult r = cpa_lfp(p);
  CHECK(r.stable);
  CHECK(r.iterations == 1);
  CHECK(model_reaches(r, "p", over_args("X = 0", {"X"})));
  CHECK(r.model.is_bottom("q"));
}

TEST_CASE("unreachable predicates stay bottom") {
  Program p = pp(R"(
    p(X) :- X = 0.
    r(X) :- r(X).
    s(X) :- X = 1, t(X).
  )");
  AnalysisResult r = cpa_lfp(p);
  CHECK(r.stable);
  CHECK_FALSE(r.model.is_bottom("p"));
  CHECK(r.model.is_bottom("r"));  // only derivable from itself
  CHECK(r.model.is_bottom("s"));  // t has no clauses at all
  CHECK(r.model.is_bottom("t"));

  std::string js = to_json(r.model);
  CHECK(js.find("\"bottom\"") != std::string::npos);
  CHECK(js.find("\"reachable\"") != std::string::npos);
  CHECK(js.find("\"false\"") != std::string::npos);
  // Bottom predicates carry no constrained fact in the printed model.
  std::string txt = to_string(r.model);
  CHECK(txt.find("p($0)") != std::string::npos);
  CHECK(txt.find("r(") == std::string::npos);
}

TEST_CASE("widening delay trades precision for termination speed") {
  Program p = pp(kCountLoop);
  std::vector<Clause> gs = goals_of(p);

  AnalysisConfig patient;
  patient.widening_delay = 5;
  AnalysisResult exact = cpa_lfp(p, patient);
  CHECK(exact.stable);
  CHECK(model_reaches(exact, "p", over_args("X >= 0, X =< 3", {"X"})));
  CHECK(check_goals(exact.model, gs, p.mode)[0] == Verdict3::Sat);

  AnalysisConfig eager;
  eager.widening_delay = 0;
  AnalysisResult coarse = cpa_lfp(p, eager);
  CHECK(coarse.stable);
  CHECK(model_reaches(coarse, "p", over_args("X >= 0", {"X"})));
  CHECK(check_goals(coarse.model, gs, p.mode)[0] == Verdict3::Unknown);

  // The coarse model loses the goal but is still a correct post-fixpoint.
  CHECK(check_model(definite_part(p), coarse.model));
}

TEST_CASE("the polyhedra are rational, integrality lives in the goal check") {
  // The model itself keeps the rational bound in both modes...
  Program p = pp("p(X) :- 2*X =< 7.");
  AnalysisResult r = cpa_lfp(p);
  CHECK(model_reaches(r, "p", over_args("2*X =< 7", {"X"})));
  p.mode = DomainMode::Rational;
  CHECK(model_reaches(cpa_lfp(p), "p", over_args("2*X =< 7", {"X"})));

  // ...but the goal check decides satisfiability in the program's mode:
  // 2*X =< 7 and X > 3 only meet at the non-integer 3.5.
  Clause g = pcl("false :- X > 3, p(X).");
  CHECK(check_goals(r.model, {g}, DomainMode::Integer)[0] == Verdict3::Sat);
  CHECK(check_goals(r.model, {g}, DomainMode::Rational)[0] == Verdict3::Unknown);

  // Clause values that are unsatisfiable in the mode are pruned: over the
  // integers this body has no solutions at all.
  Program even = pp("q(X) :- 2*X = 5.");
  CHECK(cpa_lfp(even).model.is_bottom("q"));
  even.mode = DomainMode::Rational;
  CHECK_FALSE(cpa_lfp(even).model.is_bottom("q"));
}

TEST_CASE("join order does not change the fixpoint") {
  for (const char* text : {kSumUpto, kCountLoop}) {
    for (DomainMode mode : {DomainMode::Integer, DomainMode::Rational}) {
      Program p = pp(text);
      p.mode = mode;
      AnalysisConfig hull;
      hull.join = JoinMode::Hull;
      AnalysisConfig uh;
      uh.join = JoinMode::UnionHull;
      AnalysisResult a = cpa_lfp(p, hull);
      AnalysisResult b = cpa_lfp(p, uh);
      CHECK(a.stable == b.stable);
      CHECK(models_equivalent(a.model, b.model));
    }
  }
}

TEST_CASE("goal checks are sound but never refute") {
  // The goal is genuinely violated, but an over-approximation can only
  // answer Unknown; refutation is the evaluators' job.
  Program p = pp(R"(
    p(X) :- X = 0.
    false :- X = 0, p(X).
  )");
  AnalysisResult r = cpa_lfp(p);
  CHECK(r.stable);
  auto verdicts = check_goals(r.model, goals_of(p), p.mode);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0] == Verdict3::Unknown);
  CHECK(bu_check(p, 10).verdict == Verdict3::Unsat);

  // A goal on an unreachable predicate holds vacuously.
  Program q = pp(R"(
    p(X) :- X = 0.
    false :- q(X).
  )");
  AnalysisResult rq = cpa_lfp(q);
  CHECK(check_goals(rq.model, goals_of(q), q.mode)[0] == Verdict3::Sat);
}

TEST_CASE("model checking accepts the fixpoint and rejects tampering") {
  Program p = pp(kSumUpto);
  AnalysisResult r = cpa_lfp(p);
  REQUIRE(check_model(p, r.model));

  // Too strong: claims the loop never adds anything.
  PolyModel strong = r.model;
  strong.preds["while"].constr = over_args("R = R1", {"X", "R1", "R"});
  CHECK_FALSE(check_model(p, strong));

  // Bottom on a reachable predicate contradicts the wrapper clause.
  PolyModel hollow = r.model;
  hollow.preds["sum_upto"].constr = std::nullopt;
  CHECK_FALSE(check_model(p, hollow));

  // Everything-is-true satisfies the definite clauses but not the goal.
  PolyModel top = r.model;
  for (auto& [pred, pa] : top.preds) pa.constr = LinearConstraint::top();
  CHECK(check_model(definite_part(p), top));
  CHECK_FALSE(check_model(p, top));

  std::string txt = to_string(r.model);
  CHECK(txt.find("while($0,$1,$2)") != std::string::npos);
  CHECK(txt.find("sum_upto($0,$1)") != std::string::npos);
}

TEST_CASE("fact sets are checked with disjunctive coverage") {
  auto fact = [](const std::string& pred, const std::string& c) {
    Fact f;
    f.pred = pred;
    f.arity = 1;
    f.constr = over_args(c, {"X"});
    return f;
  };

  Program p = pp(R"(
    p(X) :- X >= 1, X =< 2.
    p(X) :- X >= 2, X =< 4.
    q(X) :- X >= 1, X =< 3, p(X).
  )");
  p.mode = DomainMode::Rational;

  Interpretation good;
  good.insert(fact("p", "X >= 1, X =< 2"));
  good.insert(fact("p", "X >= 2, X =< 4"));
  good.insert(fact("q", "X >= 1, X =< 2"));
  good.insert(fact("q", "X >= 2, X =< 4"));
  // q's coverage needs both facts together: neither contains [1,3] alone.
  CHECK(check_model(p, good));

  Interpretation short_q;
  short_q.insert(fact("p", "X >= 1, X =< 2"));
  short_q.insert(fact("p", "X >= 2, X =< 4"));
  short_q.insert(fact("q", "X >= 1, X =< 2"));
  CHECK_FALSE(check_model(p, short_q));

  // Over the integers a gap at 2.5 is no gap at all.
  Program holes = pp("p(X) :- X >= 1, X =< 4.");
  Interpretation split;
  split.insert(fact("p", "X >= 1, X =< 2"));
  split.insert(fact("p", "X >= 3, X =< 4"));
  holes.mode = DomainMode::Integer;
  CHECK(check_model(holes, split));
  holes.mode = DomainMode::Rational;
  CHECK_FALSE(check_model(holes, split));

  // A converged least fixpoint is a model of the definite clauses.
  Program loop = definite_part(pp(kCountLoop));
  KleeneResult kr = kleene_lfp(loop, 20);
  REQUIRE(kr.converged);
  CHECK(check_model(loop, kr.interp));
}

TEST_CASE("derived facts stay inside the abstract model") {
  for (const char* text : {kSumUpto, kCountLoop}) {
    for (DomainMode mode : {DomainMode::Integer, DomainMode::Rational}) {
      Program p = pp(text);
      p.mode = mode;
      AnalysisResult r = cpa_lfp(p);
      // Unconverged prefixes are enough: every derived fact must already
      // lie inside the abstract fixpoint.
      KleeneResult kr = kleene_lfp(p, 4);
      check_arena_subsumed(kr.interp, r.model, mode);
    }
  }
}

TEST_CASE("property: the computed model is a post-fixpoint") {
  const int kCases = 1000;
  int radius = 3;
  for (int seed = 0; seed < kCases; ++seed) {
    CAPTURE(seed);
    DomainMode mode = seed % 2 == 0 ? DomainMode::Integer : DomainMode::Rational;
    ConstraintGen g(7100 + (unsigned)seed);
    Program p = make_layered(g, mode, radius);
    Program defs = definite_part(p);

    AnalysisResult r = cpa_lfp(p);
    CHECK(r.stable);  // recursion-free programs always stabilise
    CHECK(check_model(defs, r.model));

    // Join order and extra iteration headroom do not change the result.
    AnalysisConfig uh;
    uh.join = JoinMode::UnionHull;
    CHECK(models_equivalent(r.model, cpa_lfp(p, uh).model));
    AnalysisConfig more;
    more.max_iters += 9;
    CHECK(models_equivalent(r.model, cpa_lfp(p, more).model));

    // Everything the concrete semantics derives lies inside the model.
    KleeneResult kr = kleene_lfp(p, 4);
    check_arena_subsumed(kr.interp, r.model, mode);

    if (mode == DomainMode::Integer) {
      // Brute-force extensions respect the model pointwise.
      std::map<std::string, std::set<Rat>> ext;
      ext["a"] = oracle_extension(p, "a", ext, radius, 1);
      ext["b"] = oracle_extension(p, "b", ext, radius, 1);
      for (const auto& [pred, vals] : ext) {
        for (const Rat& v : vals) {
          auto it = r.model.preds.find(pred);
          REQUIRE(it != r.model.preds.end());
          REQUIRE(it->second.constr.has_value());
          CHECK(holds_at(*it->second.constr, {{fact_args(1)[0], v}}));
        }
      }
    }
  }
}

TEST_CASE("property: goal proofs persist under model strengthening") {
  const int kCases = 1000;
  for (int seed = 0; seed < kCases; ++seed) {
    CAPTURE(seed);
    ConstraintGen gm(9300 + (unsigned)seed, {fact_args(1)[0]});
    ConstraintGen gg(9301 + (unsigned)seed, {"X"});

    PolyModel weak;
    weak.preds["a"] = {1, gm.constraint(0, 2)};
    if (gm.uniform(0, 3) > 0) weak.preds["b"] = {1, gm.constraint(0, 2)};

    PolyModel strong = weak;
    for (auto& [pred, pa] : strong.preds) {
      switch (gm.uniform(0, 2)) {
        case 0: break;
        case 1: *pa.constr &= gm.constraint(1, 2); break;
        case 2: pa.constr = std::nullopt; break;
      }
    }

    std::vector<Clause> gs;
    for (int i = 0; i < 3; ++i) {
      Clause goal;
      goal.body = {Atom{gg.uniform(0, 1) == 0 ? "a" : "b", {rand_term(gg)}}};
      goal.constr = gg.constraint(0, 2);
      gs.push_back(std::move(goal));
    }

    auto vw = check_goals(weak, gs, DomainMode::Rational);
    auto vs = check_goals(strong, gs, DomainMode::Rational);
    for (size_t i = 0; i < gs.size(); ++i)
      if (vw[i] == Verdict3::Sat) CHECK(vs[i] == Verdict3::Sat);
  }
}
