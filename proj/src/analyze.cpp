#include "chc/analyze.hpp"

#include "chc/printer.hpp"

#include "json.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace chc {

namespace {

// The constraint with $i replaced by the atom's i-th argument term.
LinearConstraint instantiate_constraint(const LinearConstraint& c, const Atom& a) {
  std::map<Var, LinearTerm> sub;
  std::vector<Var> fa = fact_args(a.args.size());
  for (size_t i = 0; i < fa.size(); ++i) sub[fa[i]] = a.args[i];
  return c.substituted(sub);
}

// Clauses built programmatically may reuse the canonical argument names; the
// head equations below would capture them, so rename such clauses apart.
Clause guard_canonical_names(const Clause& cl) {
  VarSet canon;
  size_t arity = cl.head ? cl.head->args.size() : 0;
  for (const Var& v : fact_args(arity)) canon.insert(v);
  bool clash = false;
  for (const Var& v : cl.vars())
    if (canon.count(v)) { clash = true; break; }
  return clash ? rename_apart(cl, canon) : cl;
}

// Value the clause contributes to its head predicate under the model: body
// constraint plus instantiated body atoms, equated with the head arguments
// and projected onto $0..$arity-1. nullopt when the body is unsatisfiable or
// mentions a bottom predicate. The polyhedra themselves live over the
// rationals in either mode; integrality enters only through the mode-aware
// satisfiability pruning (and, in check_model, a tightening of the value).
// The fixpoint iteration drops disequalities, which have no convex meaning;
// the model check keeps them for precision.
std::optional<LinearConstraint> clause_value(const Clause& cl0, const PolyModel& m,
                                             DomainMode mode, const SolverBudget& budget,
                                             bool drop_ne, bool tighten) {
  Clause cl = guard_canonical_names(cl0);
  LinearConstraint acc;
  for (const auto& a : cl.constr.conjuncts)
    if (!drop_ne || a.rel != Rel::Ne) acc.add(a);
  for (const auto& b : cl.body) {
    auto inst = m.instantiate(b);
    if (!inst) return std::nullopt;
    acc &= *inst;
  }
  std::vector<Var> fa = fact_args(cl.head->args.size());
  for (size_t i = 0; i < fa.size(); ++i)
    acc.add({LinearTerm::var(fa[i]) - cl.head->args[i], Rel::Eq});
  LinearConstraint v = proj(acc, VarSet(fa.begin(), fa.end()));
  if (tighten && mode == DomainMode::Integer) v = integer_tighten(v);
  if (v.has_ground_false()) return std::nullopt;
  if (solv(v, mode, budget).verdict == Verdict3::Unsat) return std::nullopt;
  return simplify(v);
}

// Dependency components of the defined predicates, callees first. Built from
// the transitive dependency relation: two predicates share a component iff
// they reach each other, and sorting by the number of predicates strictly
// below a component yields a topological order of the condensation.
std::vector<std::vector<std::string>> scc_order(const Program& p) {
  std::set<std::string> defs = p.defined_predicates();
  auto reach = dependency_relation(p);
  auto reaches = [&](const std::string& a, const std::string& b) {
    auto it = reach.find(a);
    return it != reach.end() && it->second.count(b) > 0;
  };
  std::vector<std::vector<std::string>> comps;
  for (const auto& q : defs) {
    bool placed = false;
    for (auto& comp : comps) {
      const std::string& r = comp.front();
      if (reaches(q, r) && reaches(r, q)) {
        comp.push_back(q);
        placed = true;
        break;
      }
    }
    if (!placed) comps.push_back({q});
  }
  auto below = [&](const std::vector<std::string>& comp) {
    size_t n = 0;
    for (const auto& x : defs)
      if (reaches(comp.front(), x) &&
          std::find(comp.begin(), comp.end(), x) == comp.end())
        ++n;
    return n;
  };
  std::stable_sort(comps.begin(), comps.end(),
                   [&](const auto& a, const auto& b) { return below(a) < below(b); });
  return comps;
}

// Rational negation of one atomic constraint. Over the integers this is a
// weakening (x > 0 instead of x >= 1), which keeps the case split sound.
AtomicConstraint negated(const AtomicConstraint& a) {
  switch (a.rel) {
    case Rel::Le: return {-a.expr, Rel::Lt};
    case Rel::Lt: return {-a.expr, Rel::Le};
    case Rel::Eq: return {a.expr, Rel::Ne};
    case Rel::Ne: return {a.expr, Rel::Eq};
  }
  assert(false);
  return a;
}

// Does c entail the disjunction of ds? Decided by case splitting: c entails
// d or R iff every way of violating d still entails R. Unknown satisfiability
// results count as "no", so a true answer is trustworthy.
bool entails_union(const LinearConstraint& c, const std::vector<LinearConstraint>& ds,
                   DomainMode mode, const SolverBudget& budget) {
  if (solv(c, mode, budget).verdict == Verdict3::Unsat) return true;
  for (const auto& d : ds)
    if (entail(c, d)) return true;
  if (ds.empty()) return false;
  std::vector<LinearConstraint> rest(ds.begin() + 1, ds.end());
  for (const auto& a : ds.front().conjuncts) {
    LinearConstraint branch = c;
    branch.add(negated(a));
    if (mode == DomainMode::Integer) branch = integer_tighten(branch);
    if (branch.has_ground_false()) continue;
    if (!entails_union(branch, rest, mode, budget)) return false;
  }
  return true;
}

}  // namespace

bool PolyModel::is_bottom(const std::string& pred) const {
  auto it = preds.find(pred);
  return it == preds.end() || !it->second.constr.has_value();
}

std::optional<LinearConstraint> PolyModel::instantiate(const Atom& a) const {
  auto it = preds.find(a.pred);
  if (it == preds.end() || !it->second.constr.has_value()) return std::nullopt;
  return instantiate_constraint(*it->second.constr, a);
}

AnalysisResult cpa_lfp(const Program& p, const AnalysisConfig& cfg) {
  AnalysisResult res;
  res.stable = true;
  for (const auto& q : p.defined_predicates()) {
    auto cls = p.clauses_for(q);
    res.model.preds[q] = {cls.front()->head->args.size(), std::nullopt};
  }
  auto value_of = [&](const Clause& cl) {
    return clause_value(cl, res.model, p.mode, cfg.budget, /*drop_ne=*/true,
                        /*tighten=*/false);
  };
  for (const auto& comp : scc_order(p)) {
    std::map<std::string, size_t> joins;
    bool comp_stable = false;
    for (size_t pass = 0; pass < cfg.max_iters && !comp_stable; ++pass) {
      bool changed = false;
      for (const auto& q : comp) {
        const std::optional<LinearConstraint>& old = res.model.preds[q].constr;
        std::optional<LinearConstraint> joined;
        if (cfg.join == JoinMode::Hull) {
          joined = old;
          for (const Clause* cl : p.clauses_for(q)) {
            auto v = value_of(*cl);
            if (!v) continue;
            joined = joined ? convex_hull(*joined, *v) : *v;
          }
        } else {
          std::optional<LinearConstraint> u;
          for (const Clause* cl : p.clauses_for(q)) {
            auto v = value_of(*cl);
            if (!v) continue;
            u = u ? convex_hull(*u, *v) : *v;
          }
          if (old && u)
            joined = convex_hull(*old, *u);
          else
            joined = old ? old : u;
        }
        if (!joined) continue;  // all clause bodies unsatisfiable so far
        std::optional<LinearConstraint> next = joined;
        if (old) {
          ++joins[q];
          if (joins[q] > cfg.widening_delay) next = widen(*old, *joined);
        }
        if (!old || !equivalent(*old, *next)) {
          res.model.preds[q].constr = simplify(*next);
          changed = true;
        }
      }
      if (changed)
        ++res.iterations;
      else
        comp_stable = true;
    }
    if (!comp_stable) {
      // Cap hit: the true constraint keeps the model a post-fixpoint.
      for (const auto& q : comp) res.model.preds[q].constr = LinearConstraint::top();
      res.stable = false;
    }
  }
  return res;
}

std::vector<Verdict3> check_goals(const PolyModel& m, const std::vector<Clause>& goals,
                                  DomainMode mode, const SolverBudget& budget) {
  std::vector<Verdict3> out;
  out.reserve(goals.size());
  for (const auto& g : goals) {
    LinearConstraint acc = g.constr;
    bool bottom = false;
    for (const auto& b : g.body) {
      auto inst = m.instantiate(b);
      if (!inst) {
        bottom = true;
        break;
      }
      acc &= *inst;
    }
    if (bottom) {
      out.push_back(Verdict3::Sat);
      continue;
    }
    out.push_back(solv(acc, mode, budget).verdict == Verdict3::Unsat ? Verdict3::Sat
                                                                     : Verdict3::Unknown);
  }
  return out;
}

bool check_model(const Program& p, const PolyModel& m, const SolverBudget& budget) {
  for (const auto& cl : p.clauses) {
    if (cl.is_goal()) {
      LinearConstraint acc = cl.constr;
      bool bottom = false;
      for (const auto& b : cl.body) {
        auto inst = m.instantiate(b);
        if (!inst) {
          bottom = true;
          break;
        }
        acc &= *inst;
      }
      if (bottom) continue;  // body has no concretisation: the goal holds
      if (p.mode == DomainMode::Integer) acc = integer_tighten(acc);
      if (solv(acc, p.mode, budget).verdict != Verdict3::Unsat) return false;
      continue;
    }
    // The clause's head-space value must lie inside the head's entry. Keeping
    // body disequalities is more precise; integer tightening can present the
    // two sides incomparably, so fall back to the value the fixpoint
    // iteration itself would compute.
    auto it = m.preds.find(cl.head->pred);
    const std::optional<LinearConstraint>* head_c =
        it == m.preds.end() ? nullptr : &it->second.constr;
    bool ok = false;
    for (bool drop_ne : {false, true}) {
      auto v = clause_value(cl, m, p.mode, budget, drop_ne, /*tighten=*/true);
      if (!v) {
        ok = true;  // body unreachable under the model
        break;
      }
      if (head_c && *head_c && entail(*v, **head_c)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool check_model(const Program& p, const Interpretation& interp, const SolverBudget& budget) {
  for (const auto& cl : p.clauses) {
    std::vector<LinearConstraint> head_facts;
    if (cl.head) {
      for (size_t idx : interp.live_for(cl.head->pred)) {
        const Fact& f = interp.arena[idx];
        if (f.arity != cl.head->args.size()) continue;
        head_facts.push_back(instantiate_constraint(f.constr, *cl.head));
      }
    }
    // Every combination of facts for the body atoms must satisfy the clause.
    std::vector<LinearConstraint> pick(cl.body.size());
    auto leaf_ok = [&](const LinearConstraint& acc) {
      LinearConstraint body = p.mode == DomainMode::Integer ? integer_tighten(acc) : acc;
      if (body.has_ground_false()) return true;
      if (cl.is_goal()) return solv(body, p.mode, budget).verdict == Verdict3::Unsat;
      return entails_union(body, head_facts, p.mode, budget);
    };
    auto walk = [&](auto&& self, size_t i, const LinearConstraint& acc) -> bool {
      if (i == cl.body.size()) return leaf_ok(acc);
      const Atom& b = cl.body[i];
      for (size_t idx : interp.live_for(b.pred)) {
        const Fact& f = interp.arena[idx];
        if (f.arity != b.args.size()) continue;
        if (!self(self, i + 1, acc & instantiate_constraint(f.constr, b))) return false;
      }
      return true;  // no facts for this atom: body empty, clause vacuous
    };
    if (!walk(walk, 0, cl.constr)) return false;
  }
  return true;
}

std::string to_string(const PolyModel& m) {
  std::ostringstream os;
  for (const auto& [pred, pa] : m.preds) {
    if (!pa.constr) continue;
    Fact f;
    f.pred = pred;
    f.arity = pa.arity;
    f.constr = *pa.constr;
    os << to_string(f) << "\n";
  }
  return os.str();
}

std::string to_json(const PolyModel& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [pred, pa] : m.preds) {
    nlohmann::json obj;
    obj["predicate"] = pred;
    obj["arity"] = pa.arity;
    obj["constraint"] = pa.constr ? to_string(*pa.constr) : "false";
    obj["status"] = pa.constr ? "reachable" : "bottom";
    arr.push_back(obj);
  }
  return arr.dump(2);
}

}  // namespace chc
