// Clause evaluation: bottom-up fixpoint of the immediate-consequence
// operator and top-down goal-directed derivation search.
#pragma once

#include "chc/ast.hpp"
#include "chc/linarith.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chc {

// Canonical argument variables $0..$n-1 used by derived facts. The '$'
// prefix cannot appear in parsed programs, so fact variables never clash
// with clause variables.
std::vector<Var> fact_args(size_t arity);

// A constrained fact pred($0..$n-1) <- constr. Facts produced bottom-up
// carry the derivation that built them: the producing clause index and, for
// each body atom, the arena index of the fact it consumed. Facts produced
// top-down have no such tree; their clause is kNoClause.
struct Fact {
  static constexpr size_t kNoClause = std::numeric_limits<size_t>::max();

  std::string pred;
  size_t arity = 0;
  LinearConstraint constr;
  size_t clause = kNoClause;
  std::vector<size_t> children;
};

// A set of constrained facts. The arena keeps every fact ever inserted so
// derivations stay replayable; `live` lists the currently non-subsumed ones.
struct Interpretation {
  std::vector<Fact> arena;
  std::vector<size_t> live;

  std::vector<size_t> live_for(const std::string& pred) const;
  // Inserts with subsumption: the fact always lands in the arena, but joins
  // `live` only when no live fact of the same predicate already entails it.
  // Live facts entailed by the new one are retired. Returns whether the live
  // set changed.
  bool insert(Fact f);
};

struct EvalOptions {
  SolverBudget budget{};     // per satisfiability check
  size_t state_cap = 200000; // top-down search states before giving up
};

// One application of the immediate-consequence operator: the facts derivable
// from `in` in a single step, not merged with `in` itself. For every clause
// and every choice of live facts matching its body atoms, the image receives
// head($0..) <- proj(clause constraint /\ fact constraints /\ argument
// bindings, $0..) when that conjunction is satisfiable. A goal whose body
// fires contributes a nullary `false` fact. Children indices of image facts
// refer to `in.arena`.
//
// Over the integers the solver may fail to decide a conjunction within
// budget; such facts are kept (dropping one could hide a real consequence)
// and goal firings it cannot confirm set *taint instead of emitting a fact.
Interpretation tp_step(const Program& p, const Interpretation& in, const EvalOptions& opt = {},
                       bool* taint = nullptr);

struct KleeneResult {
  Interpretation interp;
  size_t iterations = 0;  // steps performed, including the stabilising one
  size_t productive = 0;  // steps that changed the live set or fired a goal
  bool converged = false;
  bool taint = false;  // some satisfiability check was inconclusive
};

// Kleene iteration from the empty interpretation: repeatedly unions the
// one-step image into the accumulator, dropping facts whose constraint is
// entailed by a live fact of the same predicate. Converged when a step adds
// nothing new. Goal firings appear as `false` facts but do not stop the
// iteration; use bu_check for a satisfiability verdict.
KleeneResult kleene_lfp(const Program& p, size_t max_iters, const EvalOptions& opt = {});

struct BottomUpResult {
  Verdict3 verdict = Verdict3::Unknown;  // program satisfiability
  Interpretation interp;
  size_t iterations = 0;
  bool converged = false;
  // Set when verdict is Unsat: clause indices of the goal derivation in
  // preorder, and the replayed derivation constraint projected onto the goal
  // clause's own variables.
  std::optional<std::vector<size_t>> witness;
  std::optional<LinearConstraint> answer;
};

// Bottom-up satisfiability check. Runs the Kleene iteration; a goal firing
// is confirmed by replaying its derivation tree as one exact conjunction
// (fact constraints over-approximate: projection drops disequalities over
// eliminated variables and, over the integers, may lose divisibility).
// Unsat on a confirmed firing, Sat on a taint-free fixpoint with no firing,
// Unknown otherwise.
BottomUpResult bu_check(const Program& p, size_t max_iters, const EvalOptions& opt = {});

struct DerivationOutcome {
  enum class Kind { Successful, FinitelyFailed, DepthExhausted };

  Kind kind = Kind::FinitelyFailed;
  // Successful only: final store projected onto the goal's variables, and
  // the indices of the clauses applied, in application order.
  LinearConstraint answer;
  std::vector<size_t> witness;
  // DepthExhausted only: states still unresolved at the bound.
  size_t frontier_size = 0;
};

// Explores the derivation tree of `goal` breadth-first with leftmost atom
// selection. Depth counts atom rewritings; the goal's own body sits at depth
// 0. Successful as soon as some branch empties its atom list with a store
// satisfiable in the program's domain mode; FinitelyFailed when every branch
// dies within the bound; DepthExhausted otherwise. Stores are re-checked
// after every rewriting and inconsistent branches dropped eagerly. A store
// the solver cannot decide within budget keeps its branch alive, and if such
// a branch empties its atoms it counts as unresolved frontier, never as a
// success or failure.
DerivationOutcome td_derive(const Program& p, const Clause& goal, size_t max_depth,
                            const EvalOptions& opt = {});

struct TopDownResult {
  Verdict3 verdict = Verdict3::Unknown;  // program satisfiability
  // Set when verdict is Unsat: the refuted goal's clause index followed by
  // the applied clause indices, and the successful answer constraint.
  std::optional<std::vector<size_t>> witness;
  std::optional<LinearConstraint> answer;
  bool exhausted = false;  // some goal's tree hit the depth or state bound
};

// Runs td_derive on every goal of the program. Unsat when any goal has a
// successful derivation, Sat when every goal's tree finitely fails (a
// program without goals is always satisfiable), Unknown otherwise.
TopDownResult td_check(const Program& p, size_t max_depth, const EvalOptions& opt = {});

// Success set up to k atom rewritings: the constrained facts for `pattern`'s
// predicate whose answer constraints arise from successful derivations of
// the atom taking at most k rewriting steps, projected onto the pattern's
// variables (stored over $0..$n-1). `pattern`'s arguments must be distinct
// variables. Answers the solver cannot refute within budget are kept, so
// over the integers the result may include spurious facts; exploration stops
// at opt.state_cap states, so a huge tree may also truncate the result.
Interpretation success_set_k(const Program& p, const Atom& pattern, size_t k,
                             const EvalOptions& opt = {});

// Replays the derivation tree of arena fact `idx` into one flat conjunction
// with every intermediate variable kept (nothing projected), plus the head
// argument terms. Satisfiability of the result decides the derivation
// exactly, up to the solver budget. `root_map`, when given, receives the
// renaming applied to the root clause's variables.
LinearConstraint replay_derivation(const Program& p, const Interpretation& interp, size_t idx,
                                   std::vector<LinearTerm>* head_args = nullptr,
                                   std::map<Var, Var>* root_map = nullptr);

std::string to_string(const Fact& f);

}  // namespace chc
