#include "chc/linarith.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace chc {

namespace {

using Rows = std::vector<AtomicConstraint>;

// Per-row integer strengthening. Assumes the row is normalised, so variable
// coefficients are coprime integers.
enum class RowFate { Keep, Drop, Conflict };

RowFate tighten_row(AtomicConstraint& a) {
  if (a.expr.coeffs.empty()) {
    auto g = a.ground_value();
    return *g ? RowFate::Drop : RowFate::Conflict;
  }
  const Rat k = a.expr.constant;
  switch (a.rel) {
    case Rel::Eq:
      // Coprime integer coefficients: an integer solution exists iff the
      // constant is an integer.
      return is_integer(k) ? RowFate::Keep : RowFate::Conflict;
    case Rel::Ne:
      // With a non-integer constant the equality can never hold over the
      // integers, so the disequality is vacuous.
      return is_integer(k) ? RowFate::Keep : RowFate::Drop;
    case Rel::Le:
      // sum <= -k becomes sum <= floor(-k).
      a.expr.constant = -Rat(rat_floor(-k));
      return RowFate::Keep;
    case Rel::Lt:
      // sum < -k becomes sum <= ceil(-k) - 1 when -k is integral, otherwise
      // sum <= floor(-k).
      a.expr.constant = is_integer(k) ? (k + 1) : -Rat(rat_floor(-k));
      a.rel = Rel::Le;
      return RowFate::Keep;
  }
  return RowFate::Keep;
}

// A constraint row plus the set of original rows it was combined from,
// kept as a bitmask for Imbert-style redundancy pruning. hist == 0 means
// history tracking is off for this system.
struct LRow {
  AtomicConstraint a;
  uint64_t hist = 0;
};

using LRows = std::vector<LRow>;

// Normalises, deduplicates and (in integer mode) strengthens a row set in
// place. Returns false when a ground conflict is detected. Integer-mode
// tightening of derived rows keeps intermediate Fourier-Motzkin results
// integral, which surfaces divisibility conflicts and lets branch-and-bound
// converge.
bool compact(LRows& rows, bool int_mode) {
  using Key = std::map<Var, Rat>;
  std::map<Key, size_t> ineq_slot;
  std::map<Key, size_t> eq_slot;
  std::map<Key, std::map<Rat, size_t>> ne_slot;
  std::vector<std::optional<LRow>> slots;

  for (LRow& raw : rows) {
    LRow r{raw.a.normalised(), raw.hist};
    AtomicConstraint& a = r.a;
    if (a.expr.coeffs.empty()) {
      auto g = a.ground_value();
      if (!*g) return false;
      continue;
    }
    if (int_mode) {
      switch (tighten_row(a)) {
        case RowFate::Conflict: return false;
        case RowFate::Drop: continue;
        case RowFate::Keep: break;
      }
    }
    switch (a.rel) {
      case Rel::Le:
      case Rel::Lt: {
        // Parallel rows merge into the tighter one. The merged history is the
        // intersection of the two: it stays a subset of every derivation the
        // row stands for, so history-based pruning never cuts a combination
        // that some surviving derivation path would have kept.
        auto [it, fresh] = ineq_slot.try_emplace(a.expr.coeffs, slots.size());
        if (fresh) {
          slots.emplace_back(std::move(r));
        } else {
          LRow& old = *slots[it->second];
          bool tighter = a.expr.constant > old.a.expr.constant ||
                         (a.expr.constant == old.a.expr.constant && a.rel == Rel::Lt &&
                          old.a.rel == Rel::Le);
          if (tighter) old.a = std::move(r.a);
          old.hist &= r.hist;
        }
        break;
      }
      case Rel::Eq: {
        auto [it, fresh] = eq_slot.try_emplace(a.expr.coeffs, slots.size());
        if (fresh) {
          slots.emplace_back(std::move(r));
        } else if (slots[it->second]->a.expr.constant != a.expr.constant) {
          return false;  // t = k1 and t = k2 with k1 != k2
        } else {
          slots[it->second]->hist &= r.hist;
        }
        break;
      }
      case Rel::Ne: {
        auto eq_it = eq_slot.find(a.expr.coeffs);
        if (eq_it != eq_slot.end()) {
          if (slots[eq_it->second]->a.expr.constant == a.expr.constant) return false;
          continue;  // the equality already forces a different value
        }
        auto& per_const = ne_slot[a.expr.coeffs];
        auto [it, fresh] = per_const.try_emplace(a.expr.constant, slots.size());
        if (fresh)
          slots.emplace_back(std::move(r));
        else
          slots[it->second]->hist &= r.hist;
        break;
      }
    }
  }
  rows.clear();
  for (auto& s : slots)
    if (s) rows.push_back(std::move(*s));
  return true;
}

struct TraceStep {
  Var v;
  bool pivot = false;
  AtomicConstraint eq;  // pivot row when pivot == true
  Rows bounds;          // rows mentioning v otherwise
};

VarSet lrow_vars(const LRows& rows) {
  VarSet s;
  for (const auto& r : rows) r.a.expr.collect_vars(s);
  return s;
}

VarSet row_vars_of(const Rows& rows) {
  VarSet s;
  for (const auto& a : rows) a.expr.collect_vars(s);
  return s;
}

// Eliminates v from rows, appending to the trace when requested. `depth` is
// the number of inequality eliminations performed since histories were last
// seeded, including this one; when histories are tracked, any combination
// built from more than depth+1 seed rows is redundant (Imbert's criterion)
// and dropped. `pivoted` reports whether an equality pivot was used instead
// of inequality combination. Returns false on a ground conflict.
bool eliminate_var(LRows& rows, const Var& v, bool int_mode, size_t depth,
                   std::vector<TraceStep>* trace, bool* pivoted) {
  // Prefer an equality pivot: substitute v := -rest/a everywhere. Among the
  // candidate equalities pick one with the smallest |coefficient|; a unit
  // pivot keeps derived rows integral, which matters in integer mode.
  size_t best = rows.size();
  Rat best_abs = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].a.rel != Rel::Eq) continue;
    Rat a = rows[i].a.expr.coeff(v);
    if (a == 0) continue;
    Rat abs_a = a < 0 ? Rat(-a) : a;
    if (best == rows.size() || abs_a < best_abs) {
      best = i;
      best_abs = abs_a;
      if (best_abs == 1) break;
    }
  }
  if (best != rows.size()) {
    const LRow& pivot_row = rows[best];
    Rat a = pivot_row.a.expr.coeff(v);
    LinearTerm rest = pivot_row.a.expr;
    rest.coeffs.erase(v);
    rest *= Rat(-1) / a;
    std::map<Var, LinearTerm> sub{{v, rest}};
    LRows next;
    next.reserve(rows.size() - 1);
    for (size_t j = 0; j < rows.size(); ++j) {
      if (j == best) continue;
      if (rows[j].a.expr.coeff(v) == 0) {
        next.push_back(std::move(rows[j]));
      } else {
        next.push_back({rows[j].a.substituted(sub), rows[j].hist | pivot_row.hist});
      }
    }
    if (trace) trace->push_back({v, true, pivot_row.a, {}});
    if (pivoted) *pivoted = true;
    rows = std::move(next);
    return compact(rows, int_mode);
  }
  if (pivoted) *pivoted = false;
  LRows pos, neg, rest;
  for (auto& r : rows) {
    Rat a = r.a.expr.coeff(v);
    if (a > 0)
      pos.push_back(std::move(r));
    else if (a < 0)
      neg.push_back(std::move(r));
    else
      rest.push_back(std::move(r));
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      uint64_t hist = p.hist | n.hist;
      if (hist != 0 && static_cast<size_t>(std::popcount(hist)) > depth + 1) continue;
      Rat pa = p.a.expr.coeff(v);
      Rat na = n.a.expr.coeff(v);
      LRow comb;
      comb.a.expr = p.a.expr * (-na) + n.a.expr * pa;
      comb.a.rel = (p.a.rel == Rel::Lt || n.a.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
      comb.hist = hist;
      rest.push_back(std::move(comb));
    }
  }
  if (trace) {
    TraceStep step;
    step.v = v;
    for (const auto& r : pos) step.bounds.push_back(r.a);
    for (const auto& r : neg) step.bounds.push_back(r.a);
    trace->push_back(std::move(step));
  }
  rows = std::move(rest);
  return compact(rows, int_mode);
}

// Next variable to eliminate: prefer unit equality pivots (in integer mode a
// unit pivot preserves divisibility information), then other equality
// pivots, then the smallest pos*neg product (classic greedy ordering).
Var pick_var(const LRows& rows, const VarSet& candidates, bool int_mode) {
  std::optional<Var> best;
  long best_cost = -1;
  for (const Var& v : candidates) {
    long p = 0, n = 0;
    bool has_eq = false, has_unit_eq = false;
    for (const auto& r : rows) {
      Rat a = r.a.expr.coeff(v);
      if (a == 0) continue;
      if (r.a.rel == Rel::Eq) {
        has_eq = true;
        if (a == 1 || a == -1) has_unit_eq = true;
      }
      (a > 0 ? p : n) += 1;
    }
    if (p + n == 0) continue;
    long cost;
    if (has_unit_eq || (has_eq && !int_mode))
      cost = 0;
    else if (has_eq)
      cost = 1;
    else
      cost = 2 + p * n;
    if (!best || cost < best_cost) {
      best = v;
      best_cost = cost;
      if (cost == 0) break;
    }
  }
  return best ? *best : *candidates.begin();
}

// Full elimination of `elim` (or of all variables when elim == nullptr).
// Returns false on conflict, true when the remaining rows describe the
// rational projection.
bool run_elimination(Rows& rows, const VarSet* elim, bool int_mode, std::vector<TraceStep>* trace) {
  LRows lrows;
  lrows.reserve(rows.size());
  for (const auto& r : rows) lrows.push_back({r, 0});
  // History-based pruning is only valid within an uninterrupted run of
  // inequality eliminations: an equality pivot rewrites the tableau, so the
  // surviving rows are reseeded as fresh originals and the depth restarts.
  auto reseed = [&lrows]() {
    bool track = lrows.size() <= 64;
    for (size_t i = 0; i < lrows.size(); ++i)
      lrows[i].hist = track ? (uint64_t{1} << i) : uint64_t{0};
  };
  reseed();
  if (!compact(lrows, int_mode)) return false;
  size_t depth = 0;
  for (;;) {
    VarSet present = lrow_vars(lrows);
    VarSet todo;
    if (elim) {
      std::set_intersection(present.begin(), present.end(), elim->begin(), elim->end(),
                            std::inserter(todo, todo.begin()));
    } else {
      todo = std::move(present);
    }
    if (todo.empty()) break;
    Var v = pick_var(lrows, todo, int_mode);
    bool pivoted = false;
    if (!eliminate_var(lrows, v, int_mode, depth + 1, trace, &pivoted)) return false;
    if (pivoted) {
      reseed();
      depth = 0;
    } else {
      ++depth;
    }
  }
  rows.clear();
  for (auto& r : lrows) rows.push_back(std::move(r.a));
  return true;
}

// One-sided bound extracted from a row during back-substitution.
struct Interval {
  std::optional<Rat> lb, ub;
  bool lb_strict = false, ub_strict = false;

  void add(const Rat& coeff, const Rat& rest_val, Rel rel) {
    Rat bound = -rest_val / coeff;
    bool strict = rel == Rel::Lt;
    if (coeff > 0) {  // coeff*v + rest REL 0  =>  v <= bound
      if (!ub || bound < *ub || (bound == *ub && strict)) {
        ub = bound;
        ub_strict = strict;
      }
    } else {
      if (!lb || bound > *lb || (bound == *lb && strict)) {
        lb = bound;
        lb_strict = strict;
      }
    }
  }

  // A value inside the interval, preferring integers.
  Rat pick() const {
    if (!lb && !ub) return Rat(0);
    if (lb && !ub) {
      Rat n(rat_ceil(*lb));
      if (n > *lb || !lb_strict) return n;
      return n + 1;
    }
    if (!lb && ub) {
      Rat n(rat_floor(*ub));
      if (n < *ub || !ub_strict) return n;
      return n - 1;
    }
    Rat n(rat_ceil(*lb));
    if (n == *lb && lb_strict) n += 1;
    if (n < *ub || (n == *ub && !ub_strict)) return n;
    return (*lb + *ub) / 2;
  }
};

SamplePoint rebuild_sample(const std::vector<TraceStep>& trace) {
  SamplePoint assign;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    const TraceStep& st = *it;
    if (st.pivot) {
      // a*v + rest = 0  =>  v = -rest/a
      Rat a = st.eq.expr.coeff(st.v);
      LinearTerm rest = st.eq.expr;
      rest.coeffs.erase(st.v);
      assign[st.v] = -rest.evaluate(assign) / a;
    } else {
      Interval iv;
      for (const auto& r : st.bounds) {
        Rat a = r.expr.coeff(st.v);
        LinearTerm rest = r.expr;
        rest.coeffs.erase(st.v);
        iv.add(a, rest.evaluate(assign), r.rel);
      }
      assign[st.v] = iv.pick();
    }
  }
  return assign;
}

struct RatSolveOutcome {
  bool sat = false;
  SamplePoint sample;
};

RatSolveOutcome solve_rows(Rows rows, bool int_mode) {
  VarSet orig = row_vars_of(rows);
  std::vector<TraceStep> trace;
  RatSolveOutcome out;
  out.sat = run_elimination(rows, nullptr, int_mode, &trace);
  if (!out.sat) return out;
  // Variables can drop out by cancellation without ever being eliminated;
  // give them an explicit free step so back-substitution covers them.
  VarSet traced;
  for (const auto& st : trace) traced.insert(st.v);
  for (const Var& v : orig)
    if (!traced.count(v)) trace.push_back({v, false, {}, {}});
  out.sample = rebuild_sample(trace);
  return out;
}

bool sat_rational_rows(Rows rows) { return run_elimination(rows, nullptr, false, nullptr); }

// Satisfiability over the rationals, disequalities handled by case splits.
bool sat_rational(const LinearConstraint& c) {
  for (const LinearConstraint& d : split_disequalities(c))
    if (sat_rational_rows(d.conjuncts)) return true;
  return false;
}

// Negation of an atomic constraint as a disjunction of atomic constraints.
std::vector<AtomicConstraint> negated(const AtomicConstraint& a) {
  switch (a.rel) {
    case Rel::Eq: return {{a.expr, Rel::Lt}, {-a.expr, Rel::Lt}};
    case Rel::Le: return {{-a.expr, Rel::Lt}};
    case Rel::Lt: return {{-a.expr, Rel::Le}};
    case Rel::Ne: return {{a.expr, Rel::Eq}};
  }
  return {};
}

Verdict3 solve_integer_conj(const Rows& rows0, const SolverBudget& budget, SamplePoint* out_sample) {
  std::vector<Rows> stack{rows0};
  int nodes = 0;
  bool exhausted = false;
  while (!stack.empty()) {
    if (nodes >= budget.branch_nodes) {
      exhausted = true;
      break;
    }
    ++nodes;
    Rows rows = std::move(stack.back());
    stack.pop_back();
    RatSolveOutcome r = solve_rows(rows, true);
    if (!r.sat) continue;
    auto frac = std::find_if(r.sample.begin(), r.sample.end(),
                             [](const auto& kv) { return !is_integer(kv.second); });
    if (frac == r.sample.end()) {
      if (out_sample) *out_sample = std::move(r.sample);
      return Verdict3::Sat;
    }
    const Var& v = frac->first;
    Int fl = rat_floor(frac->second);
    Rows left = rows, right = std::move(rows);
    left.emplace_back(LinearTerm::var(v) - LinearTerm(Rat(fl)), Rel::Le);
    right.emplace_back(LinearTerm(Rat(fl + 1)) - LinearTerm::var(v), Rel::Le);
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return exhausted ? Verdict3::Unknown : Verdict3::Unsat;
}

}  // namespace

const char* to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::Sat: return "sat";
    case Verdict3::Unsat: return "unsat";
    case Verdict3::Unknown: return "unknown";
  }
  return "unknown";
}

std::vector<LinearConstraint> split_disequalities(const LinearConstraint& c) {
  LinearConstraint base;
  std::vector<const AtomicConstraint*> nes;
  for (const auto& a : c.conjuncts) {
    if (a.rel == Rel::Ne)
      nes.push_back(&a);
    else
      base.add(a);
  }
  std::vector<LinearConstraint> out{std::move(base)};
  for (const AtomicConstraint* ne : nes) {
    std::vector<LinearConstraint> next;
    next.reserve(out.size() * 2);
    for (const auto& d : out) {
      LinearConstraint lt = d;
      lt.add(AtomicConstraint(ne->expr, Rel::Lt));
      LinearConstraint gt = d;
      gt.add(AtomicConstraint(-ne->expr, Rel::Lt));
      next.push_back(std::move(lt));
      next.push_back(std::move(gt));
    }
    out = std::move(next);
  }
  return out;
}

SolveResult solv(const LinearConstraint& c, DomainMode mode, const SolverBudget& budget) {
  int ne_count = 0;
  for (const auto& a : c.conjuncts)
    if (a.rel == Rel::Ne) ++ne_count;
  if (ne_count > budget.max_disequalities) return {Verdict3::Unknown, std::nullopt};

  bool any_unknown = false;
  for (const LinearConstraint& d : split_disequalities(c)) {
    if (mode == DomainMode::Rational) {
      RatSolveOutcome r = solve_rows(d.conjuncts, false);
      if (r.sat) {
        SamplePoint s = std::move(r.sample);
        for (const Var& v : c.vars()) s.try_emplace(v, 0);
        return {Verdict3::Sat, std::move(s)};
      }
    } else {
      SamplePoint s;
      Verdict3 v = solve_integer_conj(d.conjuncts, budget, &s);
      if (v == Verdict3::Sat) {
        for (const Var& var : c.vars()) s.try_emplace(var, 0);
        return {Verdict3::Sat, std::move(s)};
      }
      if (v == Verdict3::Unknown) any_unknown = true;
    }
  }
  return {any_unknown ? Verdict3::Unknown : Verdict3::Unsat, std::nullopt};
}

bool entail(const LinearConstraint& c1, const LinearConstraint& c2) {
  for (const auto& a : c2.conjuncts) {
    auto g = a.ground_value();
    if (g.has_value()) {
      if (*g) continue;
      if (sat_rational(c1)) return false;
      continue;
    }
    for (const AtomicConstraint& n : negated(a)) {
      LinearConstraint q = c1;
      q.add(n);
      if (sat_rational(q)) return false;
    }
  }
  return true;
}

bool equivalent(const LinearConstraint& c1, const LinearConstraint& c2) {
  return entail(c1, c2) && entail(c2, c1);
}

bool equivalent_mode(const LinearConstraint& c1, const LinearConstraint& c2, DomainMode mode) {
  if (mode == DomainMode::Rational) return equivalent(c1, c2);
  return equivalent(integer_tighten(c1), integer_tighten(c2));
}

LinearConstraint proj(const LinearConstraint& c, const VarSet& keep) {
  Rows rows;
  Rows kept_ne;
  for (const auto& a : c.conjuncts) {
    if (a.rel == Rel::Ne) {
      VarSet vs = a.expr.vars();
      bool inside = std::all_of(vs.begin(), vs.end(), [&](const Var& v) { return keep.count(v) > 0; });
      if (inside) kept_ne.push_back(a);
      // Disequalities over eliminated variables are dropped: the projection
      // over-approximates them.
    } else {
      rows.push_back(a);
    }
  }
  VarSet elim;
  for (const Var& v : row_vars_of(rows))
    if (!keep.count(v)) elim.insert(v);
  if (!run_elimination(rows, &elim, false, nullptr)) return LinearConstraint::falsum();
  LinearConstraint out;
  out.conjuncts = std::move(rows);
  for (auto& ne : kept_ne) out.add(std::move(ne));
  LRows cleanup;
  for (auto& a : out.conjuncts) cleanup.push_back({std::move(a), 0});
  if (!compact(cleanup, false)) return LinearConstraint::falsum();
  out.conjuncts.clear();
  for (auto& r : cleanup) out.conjuncts.push_back(std::move(r.a));
  return out;
}

LinearConstraint convex_hull(const LinearConstraint& c1, const LinearConstraint& c2) {
  if (!sat_rational(c1)) return c2;
  if (!sat_rational(c2)) return c1;

  VarSet all = c1.vars();
  c2.collect_vars(all);
  // Lifted encoding: x = y + z with y in lambda*c1 and z in (1-lambda)*c2,
  // written directly over y and lambda ('$' names cannot clash with parsed
  // variables). Homogenised operand rows keep the recession cones.
  auto y_var = [](const Var& v) { return "$y_" + v; };
  const Var lambda = "$l";

  Rows rows;
  rows.emplace_back(-LinearTerm::var(lambda), Rel::Le);
  rows.emplace_back(LinearTerm::var(lambda) - LinearTerm(Rat(1)), Rel::Le);
  for (const auto& a : c1.conjuncts) {
    if (a.rel == Rel::Ne) continue;  // dropped: the hull is closed and convex
    LinearTerm t;
    for (const auto& [v, k] : a.expr.coeffs) t += LinearTerm::var(y_var(v)) * k;
    t += LinearTerm::var(lambda) * a.expr.constant;
    rows.emplace_back(std::move(t), a.rel == Rel::Lt ? Rel::Le : a.rel);
  }
  for (const auto& a : c2.conjuncts) {
    if (a.rel == Rel::Ne) continue;
    LinearTerm t;
    for (const auto& [v, k] : a.expr.coeffs) {
      t += LinearTerm::var(v) * k;
      t -= LinearTerm::var(y_var(v)) * k;
    }
    t += LinearTerm(a.expr.constant);
    t -= LinearTerm::var(lambda) * a.expr.constant;
    rows.emplace_back(std::move(t), a.rel == Rel::Lt ? Rel::Le : a.rel);
  }

  VarSet elim;
  for (const Var& v : row_vars_of(rows))
    if (!all.count(v)) elim.insert(v);
  if (!run_elimination(rows, &elim, false, nullptr)) {
    // Both operands are satisfiable, so the lifted system cannot conflict.
    return LinearConstraint::falsum();
  }
  LinearConstraint out;
  out.conjuncts = std::move(rows);
  return simplify(out);
}

LinearConstraint widen(const LinearConstraint& c1, const LinearConstraint& c2) {
  Rows candidates;
  for (const auto& a : c1.conjuncts) {
    switch (a.rel) {
      case Rel::Ne: break;
      case Rel::Eq:
        candidates.emplace_back(a.expr, Rel::Le);
        candidates.emplace_back(-a.expr, Rel::Le);
        break;
      default: candidates.push_back(a);
    }
  }
  LinearConstraint out;
  for (const auto& cand : candidates) {
    LinearConstraint single;
    single.add(cand);
    if (entail(c2, single)) out.add(cand);
  }
  LRows cleanup;
  for (auto& a : out.conjuncts) cleanup.push_back({std::move(a), 0});
  if (!compact(cleanup, false)) return LinearConstraint::falsum();
  out.conjuncts.clear();
  for (auto& r : cleanup) out.conjuncts.push_back(std::move(r.a));
  return out;
}

LinearConstraint simplify(const LinearConstraint& c) {
  LRows lrows;
  for (const auto& a : c.conjuncts) lrows.push_back({a, 0});
  if (!compact(lrows, false)) return LinearConstraint::falsum();
  Rows rows;
  for (auto& r : lrows) rows.push_back(std::move(r.a));
  std::vector<bool> alive(rows.size(), true);
  for (size_t i = 0; i < rows.size(); ++i) {
    LinearConstraint others;
    for (size_t j = 0; j < rows.size(); ++j)
      if (j != i && alive[j]) others.add(rows[j]);
    LinearConstraint self;
    self.add(rows[i]);
    if (entail(others, self)) alive[i] = false;
  }
  LinearConstraint out;
  for (size_t i = 0; i < rows.size(); ++i)
    if (alive[i]) out.add(std::move(rows[i]));
  return out;
}

LinearConstraint integer_tighten(const LinearConstraint& c) {
  LinearConstraint out;
  for (const auto& a : c.conjuncts) {
    AtomicConstraint row = a.normalised();
    switch (tighten_row(row)) {
      case RowFate::Conflict: return LinearConstraint::falsum();
      case RowFate::Drop: continue;
      case RowFate::Keep: out.add(std::move(row));
    }
  }
  return out;
}

}  // namespace chc
