// Abstract interpretation over convex polyhedra: one constrained fact per
// predicate, fixpoint iteration with hull joins and widening, goal checking
// against the abstract model, and exact model verification.
#pragma once

#include "chc/ast.hpp"
#include "chc/eval.hpp"
#include "chc/linarith.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chc {

// Abstract value of one predicate: a constraint over the canonical argument
// variables $0..$arity-1, or bottom when no derivation reaches it.
struct PredAbstract {
  size_t arity = 0;
  std::optional<LinearConstraint> constr;  // nullopt = bottom
};

struct PolyModel {
  std::map<std::string, PredAbstract> preds;

  bool is_bottom(const std::string& pred) const;
  // The predicate's constraint with $i replaced by the atom's i-th argument
  // term; nullopt when the predicate is bottom or not in the model.
  std::optional<LinearConstraint> instantiate(const Atom& a) const;
};

enum class JoinMode {
  Hull,       // fold each clause value into the accumulated constraint
  UnionHull,  // hull the clause values first, then join with the old value
};

struct AnalysisConfig {
  size_t widening_delay = 1;  // hull joins per predicate before widening
  // Both join orders describe the same polyhedron; they only differ in the
  // intermediate constraint systems handed to the widening.
  JoinMode join = JoinMode::Hull;
  size_t max_iters = 50;  // passes per dependency component; >= widening_delay
  SolverBudget budget{};
};

struct AnalysisResult {
  PolyModel model;
  bool stable = false;    // every component reached its fixpoint under the cap
  size_t iterations = 0;  // model-changing passes, summed over components
};

// Computes a post-fixpoint of the definite clauses (goals are ignored): for
// every clause, the body instantiated with the model entails the head's
// constraint. Predicates are processed one dependency component at a time,
// callees first. Within a component, each predicate's new value is the
// convex hull of its clause values; after widening_delay joins the hull is
// widened against the previous value, which forces termination. The
// polyhedra are rational in either mode, so every fact the concrete
// semantics derives stays inside the model; integer mode only prunes
// clause values that are unsatisfiable over the integers. Disequality
// conjuncts in clause bodies are dropped up front. A component that fails
// to stabilise within max_iters passes falls back to the true constraint
// (and clears stable), keeping the returned model a post-fixpoint.
AnalysisResult cpa_lfp(const Program& p, const AnalysisConfig& cfg = {});

// Per-goal verdict against an abstract model: Sat when the goal's body
// constraint conjoined with the model constraints of its body atoms is
// unsatisfiable in `mode` (the goal provably holds in the concretisation),
// Unknown otherwise. Never Unsat: an over-approximation cannot witness a
// refutation.
std::vector<Verdict3> check_goals(const PolyModel& m, const std::vector<Clause>& goals,
                                  DomainMode mode, const SolverBudget& budget = {});

// Model check: true iff every clause of `p` is true under the candidate.
// For a definite clause, the body constraint conjoined with the candidate's
// constraints for the body atoms, projected onto the head arguments, must
// entail the head predicate's entry; goal bodies must be unsatisfiable.
// Bottom body atoms hold vacuously. Entailment is decided over the
// rationals (after integer tightening in integer mode), so an integer-only
// model can be rejected; the check never wrongly accepts.
bool check_model(const Program& p, const PolyModel& m, const SolverBudget& budget = {});

// The same check against a set of constrained facts: each body atom ranges
// over the live facts of its predicate, and the instantiated body must
// entail the union of the head predicate's facts (decided by case-splitting
// on negated conjuncts).
bool check_model(const Program& p, const Interpretation& interp, const SolverBudget& budget = {});

// Non-bottom predicates as constrained facts, one per line.
std::string to_string(const PolyModel& m);

// JSON array of {predicate, arity, constraint, status} objects, status
// "reachable" or "bottom".
std::string to_json(const PolyModel& m);

}  // namespace chc
