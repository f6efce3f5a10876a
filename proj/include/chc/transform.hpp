// Satisfiability-preserving clause transformations.
//
// The kernel is a small set of audited rewrite rules (define, unfold, fold,
// clause deletion, constraint replacement, generalisation) applied to a
// TransformState that tracks stable clause ids and the full rule history.
// A transformed program is satisfiable iff the input is, provided the final
// audit passes: every definition used for folding must have been unfolded.
//
// On top of the kernel sit whole-program strategies: call-pattern
// specialisation, the query-answer transformation, program reversal,
// redundant-argument filtering, constraint cleanup and strengthening, and
// predicate pairing. Strategies built on the kernel return the TransformState
// so callers can serialise and replay the rule script.

#pragma once

#include "chc/analyze.hpp"
#include "chc/ast.hpp"
#include "chc/linarith.hpp"

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chc {

// Raised on violated rule preconditions and by the final audit.
struct TransformError : std::runtime_error {
  explicit TransformError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::size_t kNoId = static_cast<std::size_t>(-1);

// Introduces a new predicate as a name for a constrained conjunction of
// atoms. Head arguments must be distinct variables that all occur in the
// body atoms; the constraint may only mention body atom variables; body
// atom arguments must be plain variables or constants.
struct DefinitionClause {
  Atom head;
  LinearConstraint constr;
  std::vector<Atom> body;

  Clause as_clause() const;
};

// One applied kernel rule, enough to serialise and replay the derivation.
struct HistoryEntry {
  std::string rule;                   // define|unfold|fold|delete|replace|normalise|generalise
  std::size_t clause = kNoId;         // target clause id where applicable
  std::vector<std::size_t> positions; // unfold: one atom index; fold: span
  std::size_t def = kNoId;            // definition index where applicable
  std::size_t parent = kNoId;         // define: parent definition index
  std::string text;                   // define: clause; replace/generalise: constraint; delete: mode
};

struct TransformState {
  Program program;
  std::vector<std::size_t> ids;  // ids[i] identifies program.clauses[i]
  std::size_t next_id = 0;
  SolverBudget budget{};

  struct DefRecord {
    DefinitionClause def;
    std::size_t clause_id = kNoId;  // current clause carrying the definition
    std::size_t parent = kNoId;     // definition this one was derived from
    bool unfolded = false;
  };
  std::vector<DefRecord> defs;
  // (definition index, history index) of every fold, for the audit.
  std::vector<std::pair<std::size_t, std::size_t>> folds_used;
  std::vector<HistoryEntry> history;

  std::size_t index_of(std::size_t clause_id) const;  // throws if retired
  bool is_live(std::size_t clause_id) const;
  const Clause& clause(std::size_t clause_id) const;
};

TransformState make_state(const Program& p, const SolverBudget& budget = {});

// Adds the definition clause to the program. Returns the definition index.
std::size_t define(TransformState& s, const DefinitionClause& def, std::size_t parent = kNoId);

// Replaces the clause by its resolvents against the defining clauses of the
// body atom at atom_pos. Resolvents whose constraint is unsatisfiable in the
// program mode are dropped. Returns the ids of the inserted resolvents; an
// atom whose predicate has no clauses simply deletes the target.
std::vector<std::size_t> unfold(TransformState& s, std::size_t clause_id, std::size_t atom_pos);

// Replaces the body atoms at the given positions (positions[i] is matched
// against def.body[i]) by the definition head under a variable renaming.
// Requires: the renaming is consistent and injective, constants match
// exactly, the clause constraint entails the definition constraint, no
// definition-local variable image occurs outside the folded span, and the
// target is not the definition's own clause. The clause keeps its id.
std::size_t fold(TransformState& s, std::size_t clause_id,
                 const std::vector<std::size_t>& atom_positions, std::size_t def_index);

enum class DeleteMode {
  UnsatBody,  // drop clauses with rationally unsatisfiable constraints
  Useless,    // drop clauses for predicates no goal depends on
};

void delete_clauses(TransformState& s, DeleteMode mode);

// Swaps the clause constraint for an equivalent one: the projections of old
// and new constraint onto the clause interface variables must be equivalent.
void replace_constraint(TransformState& s, std::size_t clause_id, const LinearConstraint& c);

// Puts the clause into the form folding expects: variables that the
// constraint forces equal are merged (preferring head variables), composite
// body atom arguments are flattened with fresh variables, and the constraint
// is simplified. Keeps the clause id.
void normalise_clause(TransformState& s, std::size_t clause_id);

// Weakens a definition: replaces its constraint by the given one (which the
// old constraint must entail), retracts every live clause whose head is the
// defined predicate, and re-inserts the definition clause for re-unfolding.
// Returns the id of the re-inserted clause.
std::size_t generalise(TransformState& s, std::size_t def_index, const LinearConstraint& widened);

// Checks that every definition used by a fold was unfolded; throws
// TransformError naming the offending fold otherwise.
void theorem1_audit(const TransformState& s);
bool theorem1_ok(const TransformState& s, std::string* why = nullptr);

// Serialises the history as a replayable script; replay_script applies it
// to a fresh state over the given initial program and yields an identical
// final program.
std::string to_script(const TransformState& s);
TransformState replay_script(const Program& initial, const std::string& script);

// How a strategy weakens definition constraints when folding fails.
enum class GenMode {
  Widen,      // keep the definition conjuncts the candidate entails
  HullWiden,  // widen against the convex hull of definition and candidate
};

struct SpecialiseOptions {
  GenMode gen = GenMode::Widen;
  std::size_t max_unfold = 3;   // body atom positions unfolded per round
  bool polyvariant = false;     // multiple versions per call pattern
  std::size_t version_cap = 8;  // polyvariant: versions before widening
  SolverBudget budget{};
};

// Specialises the program to its goals: introduces one definition per goal
// call pattern, unfolds it, folds the resolvents (widening definitions until
// folding succeeds), then deletes unsatisfiable and useless clauses.
TransformState specialise(const Program& p, const SpecialiseOptions& opt = {});

struct PairOptions {
  // Goal body positions of the two atoms to pair, after goal canonicalisation
  // and wrapper inlining; defaults to the leftmost pair sharing a variable.
  std::optional<std::pair<std::size_t, std::size_t>> atoms;
  GenMode gen = GenMode::Widen;
  std::size_t max_unfold = 3;
  SolverBudget budget{};
};

// Pairs two predicates conjoined in the goal into one, so their shared
// arguments are tracked jointly; otherwise follows the specialise loop.
TransformState predicate_pair(const Program& p, const PairOptions& opt = {});

// Query-answer transformation: separates top-down call reachability
// (query predicates) from bottom-up derivability (answer predicates).
// goal_index counts goal clauses, not program clauses.
Program qa_transform(const Program& p, std::size_t goal_index = 0);

struct QaNames {
  std::map<std::string, std::string> query, answer;
};
Program qa_transform_named(const Program& p, std::size_t goal_index, QaNames& names);

// Reverses a linear program: derivations run from the goals towards the
// facts. Each clause may contain at most one body atom of a defined
// predicate (one with clauses); that atom swaps with the head, while atoms
// of undefined predicates behave like constraints and stay in the body.
// Goals without a defined atom are kept unchanged. An involution up to
// body atom order.
Program reverse(const Program& p);

// Redundant argument filtering. raf erases argument positions that are only
// ever passed unconstrained variables at call sites (top-down redundant);
// far erases positions whose head occurrences never constrain anything
// (bottom-up redundant). Predicates losing arguments are renamed.
Program raf(const Program& p, std::size_t goal_index = 0);
Program far(const Program& p);

// Projects every clause constraint onto the clause interface variables,
// dropping conjuncts that only constrain clause-local variables. In integer
// mode only exactly eliminable variables (unit coefficients, no
// disequalities) are projected away.
Program cleanup_constraints(const Program& p);

// Conjoins over-approximations of the derivable and of the call-reachable
// instances of each predicate into the clauses, preserving satisfiability
// both ways. Often makes the goal constraint directly unsatisfiable.
Program strengthen(const Program& p, const AnalysisConfig& cfg = {});

}  // namespace chc
