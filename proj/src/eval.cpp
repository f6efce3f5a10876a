#include "chc/eval.hpp"

#include "chc/printer.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace chc {

namespace {

// Key identifying a bottom-up derivation: producing clause plus consumed
// facts.
using DerivKey = std::pair<size_t, std::vector<size_t>>;

std::vector<size_t> preorder_clauses(const Interpretation& interp, size_t idx) {
  std::vector<size_t> out;
  std::vector<size_t> stack{idx};
  // Children are visited left to right, so push them reversed.
  while (!stack.empty()) {
    size_t cur = stack.back();
    stack.pop_back();
    const Fact& f = interp.arena[cur];
    out.push_back(f.clause);
    for (auto it = f.children.rbegin(); it != f.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

// A pending top-down derivation: the atoms still to rewrite (leftmost
// first), the constraint store, the clauses applied so far, and the
// variables already in use for renaming clauses apart.
struct DerivState {
  std::vector<Atom> atoms;
  LinearConstraint store;
  std::vector<size_t> witness;
  VarSet used;
  bool undecided = false;  // store satisfiability unknown at last check
};

}  // namespace

std::vector<Var> fact_args(size_t arity) {
  std::vector<Var> out;
  out.reserve(arity);
  for (size_t i = 0; i < arity; ++i) out.push_back("$" + std::to_string(i));
  return out;
}

std::vector<size_t> Interpretation::live_for(const std::string& pred) const {
  std::vector<size_t> out;
  for (size_t i : live)
    if (arena[i].pred == pred) out.push_back(i);
  return out;
}

bool Interpretation::insert(Fact f) {
  size_t idx = arena.size();
  for (size_t li : live) {
    const Fact& g = arena[li];
    if (g.pred == f.pred && entail(f.constr, g.constr)) {
      arena.push_back(std::move(f));
      return false;
    }
  }
  std::vector<size_t> keep;
  keep.reserve(live.size() + 1);
  for (size_t li : live) {
    const Fact& g = arena[li];
    if (g.pred == f.pred && entail(g.constr, f.constr)) continue;
    keep.push_back(li);
  }
  keep.push_back(idx);
  live = std::move(keep);
  arena.push_back(std::move(f));
  return true;
}

Interpretation tp_step(const Program& p, const Interpretation& in, const EvalOptions& opt,
                       bool* taint) {
  Interpretation image;
  for (size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& cl = p.clauses[ci];
    if (solv(cl.constr, p.mode, opt.budget).verdict == Verdict3::Unsat) continue;

    // Compose the body left to right against the live facts of `in`,
    // pruning branches whose store is definitely inconsistent.
    struct Branch {
      LinearConstraint store;
      std::vector<size_t> children;
    };
    std::vector<Branch> frontier{{cl.constr, {}}};
    for (const Atom& b : cl.body) {
      std::vector<Branch> next;
      std::vector<Var> fa = fact_args(b.arity());
      for (const Branch& br : frontier) {
        std::map<Var, LinearTerm> ren;
        LinearConstraint link;
        for (size_t i = 0; i < fa.size(); ++i) {
          Var w = "$a" + std::to_string(br.children.size()) + "_" + std::to_string(i);
          ren[fa[i]] = LinearTerm::var(w);
          link.add({b.args[i] - LinearTerm::var(w), Rel::Eq});
        }
        for (size_t fi : in.live_for(b.pred)) {
          Branch nb{br.store, br.children};
          nb.store &= link;
          nb.store &= in.arena[fi].constr.substituted(ren);
          if (solv(nb.store, p.mode, opt.budget).verdict == Verdict3::Unsat) continue;
          nb.children.push_back(fi);
          next.push_back(std::move(nb));
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }

    for (Branch& br : frontier) {
      if (cl.is_goal()) {
        switch (solv(br.store, p.mode, opt.budget).verdict) {
          case Verdict3::Sat:
            image.insert({kFalseHead, 0, LinearConstraint::top(), ci, br.children});
            break;
          case Verdict3::Unknown:
            if (taint) *taint = true;
            break;
          case Verdict3::Unsat: break;
        }
        continue;
      }
      std::vector<Var> ha = fact_args(cl.head->arity());
      LinearConstraint store = std::move(br.store);
      for (size_t i = 0; i < ha.size(); ++i)
        store.add({cl.head->args[i] - LinearTerm::var(ha[i]), Rel::Eq});
      LinearConstraint fc = proj(store, VarSet(ha.begin(), ha.end()));
      if (solv(fc, p.mode, opt.budget).verdict == Verdict3::Unsat) continue;
      image.insert({cl.head->pred, ha.size(), std::move(fc), ci, br.children});
    }
  }
  return image;
}

namespace {

// Shared Kleene driver. Unions one-step images into the accumulator until
// nothing new appears or `max_iters` steps have run. Each distinct
// derivation key enters the arena once. When `refuted` is non-null, every
// new goal fact is replay-checked as it appears: a confirmed firing stores
// its arena index and stops the iteration, an unconfirmed one taints the
// run.
KleeneResult kleene_drive(const Program& p, size_t max_iters, const EvalOptions& opt,
                          std::optional<size_t>* refuted) {
  KleeneResult res;
  std::set<DerivKey> seen;
  for (size_t it = 0; it < max_iters; ++it) {
    bool step_taint = false;
    Interpretation image = tp_step(p, res.interp, opt, &step_taint);
    res.iterations = it + 1;
    res.taint = res.taint || step_taint;

    bool changed = false;
    for (Fact& f : image.arena) {
      if (!seen.insert({f.clause, f.children}).second) continue;
      bool is_goal = f.pred == kFalseHead;
      if (res.interp.insert(std::move(f))) changed = true;
      if (is_goal) {
        changed = true;
        if (refuted) {
          size_t fi = res.interp.arena.size() - 1;
          // Fact constraints over-approximate, so confirm the firing by
          // replaying the derivation exactly.
          switch (solv(replay_derivation(p, res.interp, fi), p.mode, opt.budget).verdict) {
            case Verdict3::Sat:
              *refuted = fi;
              return res;
            default: res.taint = true; break;
          }
        }
      }
    }

    if (!changed) {
      res.converged = true;
      return res;
    }
    ++res.productive;
  }
  return res;
}

}  // namespace

KleeneResult kleene_lfp(const Program& p, size_t max_iters, const EvalOptions& opt) {
  return kleene_drive(p, max_iters, opt, nullptr);
}

BottomUpResult bu_check(const Program& p, size_t max_iters, const EvalOptions& opt) {
  std::optional<size_t> refuted;
  KleeneResult k = kleene_drive(p, max_iters, opt, &refuted);
  BottomUpResult res;
  res.iterations = k.iterations;
  res.converged = k.converged;
  res.interp = std::move(k.interp);
  if (refuted) {
    res.verdict = Verdict3::Unsat;
    res.witness = preorder_clauses(res.interp, *refuted);
    // Express the refuting constraint over the goal clause's own variables.
    std::map<Var, Var> root_map;
    LinearConstraint conj = replay_derivation(p, res.interp, *refuted, nullptr, &root_map);
    VarSet gv;
    std::map<Var, LinearTerm> back;
    for (const auto& [orig, renamed] : root_map) {
      gv.insert(renamed);
      back[renamed] = LinearTerm::var(orig);
    }
    res.answer = simplify(proj(conj, gv).substituted(back));
  } else if (k.converged) {
    res.verdict = k.taint ? Verdict3::Unknown : Verdict3::Sat;
  }
  return res;
}

namespace {

// Expands derivation trees breadth-first under the leftmost computation
// rule, invoking `on_success` for each derivation that empties its atoms
// with a satisfiable store (return true to stop the search). Results other
// than success are tallied in the counters.
struct TdSearch {
  const Program& p;
  const EvalOptions& opt;
  size_t max_depth;
  bool undecided_succeeds = false;  // hand undecided completions to on_success
  size_t unresolved = 0;            // emptied atoms but satisfiability undecided
  size_t capped = 0;                // alive at the depth bound
  bool truncated = false;           // state budget exhausted

  template <typename OnSuccess>
  void run(DerivState start, OnSuccess on_success) {
    std::deque<DerivState> frontier;
    size_t states = 0;

    auto settle = [&](DerivState&& s) -> bool {
      switch (solv(s.store, p.mode, opt.budget).verdict) {
        case Verdict3::Unsat: return false;
        case Verdict3::Unknown:
          if (s.atoms.empty()) {
            ++unresolved;  // a possible success the solver could not decide
            return undecided_succeeds ? on_success(std::move(s)) : false;
          }
          s.undecided = true;
          break;
        case Verdict3::Sat:
          if (s.atoms.empty()) return on_success(std::move(s));
          break;
      }
      frontier.push_back(std::move(s));
      return false;
    };

    if (settle(std::move(start))) return;
    while (!frontier.empty()) {
      DerivState s = std::move(frontier.front());
      frontier.pop_front();
      if (s.witness.size() >= max_depth) {
        ++capped;
        continue;
      }
      if (++states > opt.state_cap) {
        truncated = true;
        capped += 1 + frontier.size();
        return;
      }
      const Atom sel = s.atoms.front();
      for (size_t ci = 0; ci < p.clauses.size(); ++ci) {
        const Clause& cl = p.clauses[ci];
        if (!cl.head || cl.head->pred != sel.pred || cl.head->arity() != sel.arity()) continue;
        Clause rc = rename_apart(cl, s.used);
        DerivState ns;
        ns.atoms.assign(rc.body.begin(), rc.body.end());
        ns.atoms.insert(ns.atoms.end(), s.atoms.begin() + 1, s.atoms.end());
        ns.store = s.store;
        ns.store &= rc.constr;
        for (size_t i = 0; i < sel.arity(); ++i)
          ns.store.add({sel.args[i] - rc.head->args[i], Rel::Eq});
        ns.witness = s.witness;
        ns.witness.push_back(ci);
        ns.used = s.used;
        VarSet rcv = rc.vars();
        ns.used.insert(rcv.begin(), rcv.end());
        if (settle(std::move(ns))) return;
      }
    }
  }
};

}  // namespace

DerivationOutcome td_derive(const Program& p, const Clause& goal, size_t max_depth,
                            const EvalOptions& opt) {
  if (!goal.is_goal()) throw std::invalid_argument("td_derive: clause is not a goal");
  DerivationOutcome res;
  VarSet gv = goal.vars();
  TdSearch search{p, opt, max_depth};
  search.run({goal.body, goal.constr, {}, gv, false}, [&](DerivState&& s) {
    res.kind = DerivationOutcome::Kind::Successful;
    res.answer = simplify(proj(s.store, gv));
    res.witness = std::move(s.witness);
    return true;
  });
  if (res.kind == DerivationOutcome::Kind::Successful) return res;
  res.frontier_size = search.unresolved + search.capped;
  res.kind = res.frontier_size == 0 ? DerivationOutcome::Kind::FinitelyFailed
                                    : DerivationOutcome::Kind::DepthExhausted;
  return res;
}

TopDownResult td_check(const Program& p, size_t max_depth, const EvalOptions& opt) {
  TopDownResult res;
  bool all_failed = true;
  for (size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& cl = p.clauses[ci];
    if (!cl.is_goal()) continue;
    DerivationOutcome out = td_derive(p, cl, max_depth, opt);
    switch (out.kind) {
      case DerivationOutcome::Kind::Successful: {
        res.verdict = Verdict3::Unsat;
        std::vector<size_t> w{ci};
        w.insert(w.end(), out.witness.begin(), out.witness.end());
        res.witness = std::move(w);
        res.answer = std::move(out.answer);
        return res;
      }
      case DerivationOutcome::Kind::FinitelyFailed: break;
      case DerivationOutcome::Kind::DepthExhausted:
        all_failed = false;
        res.exhausted = true;
        break;
    }
  }
  if (all_failed) res.verdict = Verdict3::Sat;
  return res;
}

Interpretation success_set_k(const Program& p, const Atom& pattern, size_t k,
                             const EvalOptions& opt) {
  std::vector<Var> fa = fact_args(pattern.arity());
  VarSet pattern_vars;
  for (const LinearTerm& t : pattern.args) {
    std::optional<Var> v = t.as_var();
    if (!v || !pattern_vars.insert(*v).second)
      throw std::invalid_argument("success_set_k: pattern arguments must be distinct variables");
  }
  // The pattern's own names are immaterial; search directly over $0..$n-1.
  Atom start{pattern.pred, {}};
  for (const Var& v : fa) start.args.push_back(LinearTerm::var(v));

  Interpretation out;
  TdSearch search{p, opt, k};
  search.undecided_succeeds = true;  // an unrefuted answer still enters the set
  search.run({{start}, LinearConstraint::top(), {}, VarSet(fa.begin(), fa.end()), false},
             [&](DerivState&& s) {
               out.insert({pattern.pred, fa.size(),
                           simplify(proj(s.store, VarSet(fa.begin(), fa.end()))), Fact::kNoClause,
                           {}});
               return false;  // keep enumerating successes up to the bound
             });
  return out;
}

LinearConstraint replay_derivation(const Program& p, const Interpretation& interp, size_t idx,
                                   std::vector<LinearTerm>* head_args,
                                   std::map<Var, Var>* root_map) {
  struct Impl {
    const Program& p;
    const Interpretation& interp;
    size_t counter = 0;

    LinearConstraint node(size_t fi, std::vector<LinearTerm>* head_out,
                          std::map<Var, Var>* map_out) {
      const Fact& f = interp.arena[fi];
      const Clause& cl = p.clauses[f.clause];
      std::string suffix = "$r" + std::to_string(counter++);
      std::map<Var, LinearTerm> ren;
      VarSet cvs = cl.vars();
      for (const Var& v : cvs) {
        ren[v] = LinearTerm::var(v + suffix);
        if (map_out) (*map_out)[v] = v + suffix;
      }
      LinearConstraint conj = cl.constr.substituted(ren);
      for (size_t i = 0; i < cl.body.size(); ++i) {
        std::vector<LinearTerm> child_head;
        conj &= node(f.children[i], &child_head, nullptr);
        for (size_t j = 0; j < cl.body[i].args.size(); ++j)
          conj.add({cl.body[i].args[j].substituted(ren) - child_head[j], Rel::Eq});
      }
      if (head_out) {
        head_out->clear();
        if (cl.head)
          for (const LinearTerm& t : cl.head->args) head_out->push_back(t.substituted(ren));
      }
      return conj;
    }
  };
  return Impl{p, interp}.node(idx, head_args, root_map);
}

std::string to_string(const Fact& f) {
  Clause c;
  Atom head{f.pred, {}};
  for (const Var& v : fact_args(f.arity)) head.args.push_back(LinearTerm::var(v));
  c.head = std::move(head);
  c.constr = f.constr;
  return to_string(c);
}

}  // namespace chc
