#include "chc/transform.hpp"

#include "chc/parser.hpp"
#include "chc/printer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace chc {

namespace {

bool is_zero_term(const LinearTerm& t) {
  if (!(t.constant == 0)) return false;
  for (const auto& [v, k] : t.coeffs)
    if (!(k == 0)) return false;
  return true;
}

bool term_eq(const LinearTerm& a, const LinearTerm& b) { return is_zero_term(a - b); }

bool term_mentions(const LinearTerm& t, const Var& v) {
  auto it = t.coeffs.find(v);
  return it != t.coeffs.end() && !(it->second == 0);
}

bool constr_mentions(const LinearConstraint& c, const Var& v) {
  for (const auto& a : c.conjuncts)
    if (term_mentions(a.expr, v)) return true;
  return false;
}

std::set<std::string> occurring_preds(const Program& p) {
  std::set<std::string> out;
  for (const Clause& c : p.clauses) {
    if (c.head) out.insert(c.head->pred);
    for (const Atom& a : c.body) out.insert(a.pred);
  }
  return out;
}

// Smallest unused name of the form base, base1, base2, ...
std::string fresh_pred(const std::string& base, std::set<std::string>& taken) {
  std::string b = base.empty() ? std::string("p") : base;
  if (b != kFalseHead && taken.insert(b).second) return b;
  for (size_t k = 1;; ++k) {
    std::string cand = b + std::to_string(k);
    if (cand != kFalseHead && taken.insert(cand).second) return cand;
  }
}

// Renaming for a predicate that lost argument positions: strip trailing
// digits, then pick the smallest numbered variant free in avoid/assigned.
std::string renumber_pred(const std::string& name, const std::set<std::string>& avoid,
                          std::set<std::string>& assigned) {
  std::string base = name;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (base.empty()) base = "p";
  for (size_t k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (cand != kFalseHead && !avoid.count(cand) && !assigned.count(cand)) {
      assigned.insert(cand);
      return cand;
    }
  }
}

std::string join_indices(const std::vector<std::size_t>& xs) {
  std::ostringstream out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ",";
    out << xs[i];
  }
  return out.str();
}

}  // namespace

Clause DefinitionClause::as_clause() const {
  Clause c;
  c.head = head;
  c.constr = constr;
  c.body = body;
  return c;
}

std::size_t TransformState::index_of(std::size_t clause_id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == clause_id) return i;
  throw TransformError("clause id " + std::to_string(clause_id) + " is not live");
}

bool TransformState::is_live(std::size_t clause_id) const {
  for (std::size_t id : ids)
    if (id == clause_id) return true;
  return false;
}

const Clause& TransformState::clause(std::size_t clause_id) const {
  return program.clauses[index_of(clause_id)];
}

TransformState make_state(const Program& p, const SolverBudget& budget) {
  TransformState s;
  s.program = p;
  s.budget = budget;
  s.ids.resize(p.clauses.size());
  for (std::size_t i = 0; i < p.clauses.size(); ++i) s.ids[i] = i;
  s.next_id = p.clauses.size();
  return s;
}

namespace {

std::size_t append_clause(TransformState& s, Clause c) {
  s.program.clauses.push_back(std::move(c));
  s.ids.push_back(s.next_id);
  return s.next_id++;
}

void erase_index(TransformState& s, std::size_t idx) {
  s.program.clauses.erase(s.program.clauses.begin() + static_cast<std::ptrdiff_t>(idx));
  s.ids.erase(s.ids.begin() + static_cast<std::ptrdiff_t>(idx));
}

// All predicate names this derivation has ever seen, including retired ones.
std::set<std::string> known_preds(const TransformState& s) {
  std::set<std::string> out = occurring_preds(s.program);
  for (const auto& d : s.defs) out.insert(d.def.head.pred);
  out.insert(kFalseHead);
  return out;
}

}  // namespace

std::size_t define(TransformState& s, const DefinitionClause& def, std::size_t parent) {
  if (def.body.empty()) throw TransformError("a definition needs at least one body atom");
  if (parent != kNoId && parent >= s.defs.size())
    throw TransformError("definition parent index out of range");
  VarSet head_vars;
  for (const LinearTerm& a : def.head.args) {
    auto v = a.as_var();
    if (!v || !head_vars.insert(*v).second)
      throw TransformError("definition head arguments must be distinct variables");
  }
  VarSet atom_vars;
  for (const Atom& a : def.body) {
    for (const LinearTerm& arg : a.args) {
      if (!arg.as_var() && !arg.coeffs.empty())
        throw TransformError("definition body atom arguments must be variables or constants");
    }
    VarSet vs = a.vars();
    atom_vars.insert(vs.begin(), vs.end());
  }
  for (const Var& v : head_vars)
    if (!atom_vars.count(v))
      throw TransformError("definition head variable " + v + " does not occur in the body atoms");
  for (const Var& v : def.constr.vars())
    if (!atom_vars.count(v))
      throw TransformError("definition constraint variable " + v +
                           " does not occur in the body atoms");
  if (known_preds(s).count(def.head.pred))
    throw TransformError("definition predicate " + def.head.pred + " is already in use");

  std::size_t id = append_clause(s, def.as_clause());
  TransformState::DefRecord rec;
  rec.def = def;
  rec.clause_id = id;
  rec.parent = parent;
  s.defs.push_back(std::move(rec));

  HistoryEntry h;
  h.rule = "define";
  h.def = s.defs.size() - 1;
  h.parent = parent;
  h.text = to_string(def.as_clause());
  s.history.push_back(std::move(h));
  return s.defs.size() - 1;
}

std::vector<std::size_t> unfold(TransformState& s, std::size_t clause_id, std::size_t atom_pos) {
  std::size_t idx = s.index_of(clause_id);
  Clause target = s.program.clauses[idx];
  if (atom_pos >= target.body.size())
    throw TransformError("unfold position " + std::to_string(atom_pos) +
                         " selects no atom (constraints cannot be unfolded)");
  Atom call = target.body[atom_pos];

  std::vector<Clause> defining;
  for (const Clause& c : s.program.clauses)
    if (c.head && c.head->pred == call.pred) defining.push_back(c);

  erase_index(s, idx);
  for (auto& d : s.defs)
    if (d.clause_id == clause_id) d.unfolded = true;

  VarSet target_vars = target.vars();
  std::vector<Clause> resolvents;
  for (const Clause& dc : defining) {
    Clause d = rename_apart(dc, target_vars);
    if (d.head->args.size() != call.args.size())
      throw TransformError("arity mismatch unfolding " + call.pred);
    std::map<Var, LinearTerm> sub;
    std::vector<std::pair<LinearTerm, LinearTerm>> eqs;
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      const LinearTerm& pat = d.head->args[i];
      auto pv = pat.as_var();
      if (pv && !sub.count(*pv))
        sub[*pv] = call.args[i];
      else
        eqs.emplace_back(pat, call.args[i]);
    }
    Clause r;
    r.head = target.head;
    r.constr = target.constr;
    for (const auto& [pat, arg] : eqs) r.constr.add({pat.substituted(sub) - arg, Rel::Eq});
    r.constr &= d.constr.substituted(sub);
    r.constr = simplify(r.constr);
    r.body.assign(target.body.begin(), target.body.begin() + static_cast<std::ptrdiff_t>(atom_pos));
    for (const Atom& a : d.body) r.body.push_back(a.substituted(sub));
    r.body.insert(r.body.end(), target.body.begin() + static_cast<std::ptrdiff_t>(atom_pos) + 1,
                  target.body.end());
    if (r.constr.has_ground_false()) continue;
    if (solv(r.constr, s.program.mode, s.budget).verdict == Verdict3::Unsat) continue;
    resolvents.push_back(std::move(r));
  }

  // Insert the survivors where the target stood, in defining-clause order.
  std::vector<std::size_t> created;
  for (std::size_t i = 0; i < resolvents.size(); ++i) {
    s.program.clauses.insert(s.program.clauses.begin() + static_cast<std::ptrdiff_t>(idx + i),
                             std::move(resolvents[i]));
    s.ids.insert(s.ids.begin() + static_cast<std::ptrdiff_t>(idx + i), s.next_id);
    created.push_back(s.next_id++);
  }

  HistoryEntry h;
  h.rule = "unfold";
  h.clause = clause_id;
  h.positions = {atom_pos};
  s.history.push_back(std::move(h));
  return created;
}

std::size_t fold(TransformState& s, std::size_t clause_id,
                 const std::vector<std::size_t>& atom_positions, std::size_t def_index) {
  if (def_index >= s.defs.size()) throw TransformError("fold definition index out of range");
  TransformState::DefRecord& dr = s.defs[def_index];
  if (clause_id == dr.clause_id)
    throw TransformError("a definition cannot be folded with itself");
  std::size_t idx = s.index_of(clause_id);
  const Clause& target = s.program.clauses[idx];
  if (atom_positions.size() != dr.def.body.size())
    throw TransformError("fold span does not match the definition body");
  std::set<std::size_t> posset;
  for (std::size_t p : atom_positions) {
    if (p >= target.body.size()) throw TransformError("fold position out of range");
    if (!posset.insert(p).second) throw TransformError("fold positions must be distinct");
  }

  // Match the span against the definition body, building an injective
  // variable renaming; constants must coincide exactly.
  std::map<Var, Var> rho;
  std::set<Var> image;
  for (std::size_t i = 0; i < atom_positions.size(); ++i) {
    const Atom& da = dr.def.body[i];
    const Atom& ta = target.body[atom_positions[i]];
    if (da.pred != ta.pred || da.args.size() != ta.args.size())
      throw TransformError("fold span atom " + ta.pred + " does not match definition atom " +
                           da.pred);
    for (std::size_t k = 0; k < da.args.size(); ++k) {
      const LinearTerm& dterm = da.args[k];
      const LinearTerm& tterm = ta.args[k];
      if (auto dv = dterm.as_var()) {
        auto tv = tterm.as_var();
        if (!tv)
          throw TransformError("fold requires a variable argument where the definition has one");
        auto it = rho.find(*dv);
        if (it == rho.end()) {
          if (!image.insert(*tv).second)
            throw TransformError("fold variable renaming is not injective");
          rho.emplace(*dv, *tv);
        } else if (it->second != *tv) {
          throw TransformError("fold variable renaming is inconsistent");
        }
      } else if (dterm.coeffs.empty()) {
        if (!term_eq(dterm, tterm))
          throw TransformError("fold constant argument mismatch on " + da.pred);
      } else {
        throw TransformError("definition body atom arguments must be variables or constants");
      }
    }
  }

  std::map<Var, LinearTerm> sub;
  for (const auto& [v, w] : rho) sub[v] = LinearTerm::var(w);
  if (!entail(target.constr, dr.def.constr.substituted(sub)))
    throw TransformError(
        "fold side condition fails: the clause constraint does not entail the definition "
        "constraint");

  // A definition-local variable may not reappear outside the folded span,
  // or the fold would equate unrelated values.
  VarSet def_head_vars = dr.def.head.vars();
  VarSet outside;
  if (target.head) {
    VarSet hv = target.head->vars();
    outside.insert(hv.begin(), hv.end());
  }
  {
    VarSet cv = target.constr.vars();
    outside.insert(cv.begin(), cv.end());
  }
  for (std::size_t i = 0; i < target.body.size(); ++i) {
    if (posset.count(i)) continue;
    VarSet av = target.body[i].vars();
    outside.insert(av.begin(), av.end());
  }
  for (const auto& [v, w] : rho) {
    if (def_head_vars.count(v)) continue;
    if (outside.count(w))
      throw TransformError("fold would capture variable " + w +
                           ": it occurs outside the folded atoms");
  }

  Atom replacement = dr.def.head.substituted(sub);
  std::size_t insert_at = *std::min_element(atom_positions.begin(), atom_positions.end());
  std::vector<Atom> body;
  for (std::size_t i = 0; i < target.body.size(); ++i) {
    if (i == insert_at) body.push_back(replacement);
    if (!posset.count(i)) body.push_back(target.body[i]);
  }
  s.program.clauses[idx].body = std::move(body);

  s.folds_used.emplace_back(def_index, s.history.size());
  HistoryEntry h;
  h.rule = "fold";
  h.clause = clause_id;
  h.positions = atom_positions;
  h.def = def_index;
  s.history.push_back(std::move(h));
  return clause_id;
}

void delete_clauses(TransformState& s, DeleteMode mode) {
  if (mode == DeleteMode::UnsatBody) {
    for (std::size_t i = s.program.clauses.size(); i-- > 0;) {
      if (solv(s.program.clauses[i].constr, DomainMode::Rational, s.budget).verdict ==
          Verdict3::Unsat)
        erase_index(s, i);
    }
  } else {
    bool has_goal = false;
    for (const Clause& c : s.program.clauses) has_goal = has_goal || c.is_goal();
    if (has_goal) {
      auto deps = dependency_relation(s.program);
      auto it = deps.find(kFalseHead);
      const std::set<std::string> empty;
      const std::set<std::string>& reach = it == deps.end() ? empty : it->second;
      for (std::size_t i = s.program.clauses.size(); i-- > 0;) {
        const Clause& c = s.program.clauses[i];
        if (!c.is_goal() && !reach.count(c.head->pred)) erase_index(s, i);
      }
    }
  }
  HistoryEntry h;
  h.rule = "delete";
  h.text = mode == DeleteMode::UnsatBody ? "unsat" : "useless";
  s.history.push_back(std::move(h));
}

void replace_constraint(TransformState& s, std::size_t clause_id, const LinearConstraint& c) {
  std::size_t idx = s.index_of(clause_id);
  Clause& cl = s.program.clauses[idx];
  VarSet iface = cl.interface_vars();
  if (!equivalent(proj(cl.constr, iface), proj(c, iface)))
    throw TransformError(
        "constraint replacement is not equivalent on the clause interface variables");
  HistoryEntry h;
  h.rule = "replace";
  h.clause = clause_id;
  h.text = to_string(c);
  cl.constr = simplify(c);
  s.history.push_back(std::move(h));
}

void normalise_clause(TransformState& s, std::size_t clause_id) {
  std::size_t idx = s.index_of(clause_id);
  Clause cl = s.program.clauses[idx];

  // Flatten composite body atom arguments; plain constants stay.
  VarSet avoid = cl.vars();
  for (Atom& a : cl.body) {
    for (LinearTerm& arg : a.args) {
      if (arg.as_var() || arg.coeffs.empty()) continue;
      Var f = fresh_var("V", avoid);
      cl.constr.add({LinearTerm::var(f) - arg, Rel::Eq});
      arg = LinearTerm::var(f);
    }
  }
  cl.constr = simplify(cl.constr);

  // Merge body atom variables the constraint forces equal, preferring to
  // keep head variables (the head is never rewritten). Only true aliases
  // are merged: a variable pinned to a single value stays separate, so
  // value coincidences do not narrow the call pattern.
  VarSet head_vars = cl.head_vars();
  for (bool changed = true; changed;) {
    changed = false;
    SolveResult sat = solv(cl.constr, DomainMode::Rational, s.budget);
    if (sat.verdict != Verdict3::Sat) break;
    auto ground = [&](const Var& v) {
      auto it = sat.sample->find(v);
      if (it == sat.sample->end()) return false;
      LinearConstraint pin;
      pin.add({LinearTerm::var(v) - LinearTerm(it->second), Rel::Eq});
      return entail(cl.constr, pin);
    };
    std::vector<Var> avs;
    std::set<Var> seen;
    for (const Atom& a : cl.body)
      for (const LinearTerm& arg : a.args)
        for (const auto& [v, k] : arg.coeffs)
          if (!(k == 0) && seen.insert(v).second) avs.push_back(v);
    for (std::size_t i = 0; i < avs.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < avs.size() && !changed; ++j) {
        Var keep = avs[i], drop = avs[j];
        if (head_vars.count(keep) && head_vars.count(drop)) continue;
        if (head_vars.count(drop)) std::swap(keep, drop);
        LinearConstraint eq;
        eq.add({LinearTerm::var(keep) - LinearTerm::var(drop), Rel::Eq});
        if (!entail(cl.constr, eq)) continue;
        if (ground(keep)) continue;
        std::map<Var, LinearTerm> m{{drop, LinearTerm::var(keep)}};
        cl.constr = simplify(cl.constr.substituted(m));
        for (Atom& a : cl.body) a = a.substituted(m);
        changed = true;
      }
    }
  }

  s.program.clauses[idx] = std::move(cl);
  HistoryEntry h;
  h.rule = "normalise";
  h.clause = clause_id;
  s.history.push_back(std::move(h));
}

std::size_t generalise(TransformState& s, std::size_t def_index, const LinearConstraint& widened) {
  if (def_index >= s.defs.size()) throw TransformError("generalise definition index out of range");
  TransformState::DefRecord& dr = s.defs[def_index];
  if (!entail(dr.def.constr, widened))
    throw TransformError("generalisation must weaken the definition constraint");
  const std::string& pred = dr.def.head.pred;
  for (std::size_t i = s.program.clauses.size(); i-- > 0;) {
    const Clause& c = s.program.clauses[i];
    if (c.head && c.head->pred == pred) erase_index(s, i);
  }
  HistoryEntry h;
  h.rule = "generalise";
  h.def = def_index;
  h.text = to_string(widened);
  dr.def.constr = simplify(widened);
  dr.unfolded = false;
  dr.clause_id = append_clause(s, dr.def.as_clause());
  s.history.push_back(std::move(h));
  return dr.clause_id;
}

namespace {

std::string script_line(const HistoryEntry& e) {
  std::ostringstream out;
  if (e.rule == "define") {
    out << "define parent=";
    if (e.parent == kNoId)
      out << "none";
    else
      out << e.parent;
    out << " " << e.text;
  } else if (e.rule == "unfold") {
    out << "unfold clause=" << e.clause << " atom=" << e.positions[0];
  } else if (e.rule == "fold") {
    out << "fold clause=" << e.clause << " def=" << e.def << " atoms=" << join_indices(e.positions);
  } else if (e.rule == "delete") {
    out << "delete mode=" << e.text;
  } else if (e.rule == "replace") {
    out << "replace clause=" << e.clause << " constraint=" << e.text;
  } else if (e.rule == "normalise") {
    out << "normalise clause=" << e.clause;
  } else if (e.rule == "generalise") {
    out << "generalise def=" << e.def << " constraint=" << e.text;
  }
  return out.str();
}

}  // namespace

bool theorem1_ok(const TransformState& s, std::string* why) {
  for (const auto& [def_index, hist_index] : s.folds_used) {
    if (!s.defs[def_index].unfolded) {
      if (why)
        *why = "definition " + s.defs[def_index].def.head.pred +
               " was used for folding but never unfolded (history entry " +
               std::to_string(hist_index) + ": " + script_line(s.history[hist_index]) + ")";
      return false;
    }
  }
  return true;
}

void theorem1_audit(const TransformState& s) {
  std::string why;
  if (!theorem1_ok(s, &why)) throw TransformError("audit failed: " + why);
}

std::string to_script(const TransformState& s) {
  std::ostringstream out;
  out << "# transform script\n";
  out << "budget branch_nodes=" << s.budget.branch_nodes
      << " max_disequalities=" << s.budget.max_disequalities << "\n";
  for (const HistoryEntry& e : s.history) out << script_line(e) << "\n";
  return out.str();
}

namespace {

// key=value tokens up to the first key whose value runs to end of line.
std::size_t parse_index(const std::string& line, const std::string& key) {
  std::string pat = key + "=";
  auto at = line.find(pat);
  if (at == std::string::npos)
    throw TransformError("script line missing " + key + ": " + line);
  std::size_t v = 0;
  std::size_t i = at + pat.size();
  if (i >= line.size() || !std::isdigit(static_cast<unsigned char>(line[i])))
    throw TransformError("script line has malformed " + key + ": " + line);
  for (; i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])); ++i)
    v = v * 10 + static_cast<std::size_t>(line[i] - '0');
  return v;
}

std::string parse_tail(const std::string& line, const std::string& key) {
  std::string pat = key + "=";
  auto at = line.find(pat);
  if (at == std::string::npos)
    throw TransformError("script line missing " + key + ": " + line);
  return line.substr(at + pat.size());
}

}  // namespace

TransformState replay_script(const Program& initial, const std::string& script) {
  TransformState s = make_state(initial);
  std::istringstream in(script);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos || line[start] == '#') continue;
    std::string body = line.substr(start);
    std::istringstream toks(body);
    std::string op;
    toks >> op;
    if (op == "budget") {
      s.budget.branch_nodes = parse_index(body, "branch_nodes");
      s.budget.max_disequalities = parse_index(body, "max_disequalities");
    } else if (op == "define") {
      std::string parent_tok;
      toks >> parent_tok;
      if (parent_tok.rfind("parent=", 0) != 0)
        throw TransformError("malformed define line: " + line);
      std::string pv = parent_tok.substr(7);
      std::size_t parent = pv == "none" ? kNoId : parse_index(parent_tok, "parent");
      auto at = body.find(parent_tok) + parent_tok.size();
      std::string text = body.substr(at);
      if (!text.empty() && text.front() == ' ') text.erase(text.begin());
      Clause c = parse_clause(text);
      if (!c.head) throw TransformError("a definition clause needs a head: " + line);
      DefinitionClause d;
      d.head = *c.head;
      d.constr = c.constr;
      d.body = c.body;
      define(s, d, parent);
    } else if (op == "unfold") {
      unfold(s, parse_index(body, "clause"), parse_index(body, "atom"));
    } else if (op == "fold") {
      std::string atoms = parse_tail(body, "atoms");
      std::vector<std::size_t> positions;
      std::istringstream as(atoms);
      std::string tok;
      while (std::getline(as, tok, ',')) positions.push_back(std::stoul(tok));
      fold(s, parse_index(body, "clause"), positions, parse_index(body, "def"));
    } else if (op == "delete") {
      std::string mode = parse_tail(body, "mode");
      if (mode == "unsat")
        delete_clauses(s, DeleteMode::UnsatBody);
      else if (mode == "useless")
        delete_clauses(s, DeleteMode::Useless);
      else
        throw TransformError("unknown delete mode: " + mode);
    } else if (op == "replace") {
      std::string text = parse_tail(body, "constraint");
      LinearConstraint c = text.empty() ? LinearConstraint() : parse_constraint(text);
      replace_constraint(s, parse_index(body, "clause"), c);
    } else if (op == "normalise") {
      normalise_clause(s, parse_index(body, "clause"));
    } else if (op == "generalise") {
      std::string text = parse_tail(body, "constraint");
      LinearConstraint c = text.empty() ? LinearConstraint() : parse_constraint(text);
      generalise(s, parse_index(body, "def"), c);
    } else {
      throw TransformError("unknown script operation: " + op);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Specialisation engine shared by specialise and predicate_pair.
// ---------------------------------------------------------------------------

namespace {

// Call pattern of an atom span: predicates, arities, and the sharing pattern
// of variable/constant arguments. Definitions are grouped by this key.
std::string skeleton_of(const std::vector<const Atom*>& span) {
  std::ostringstream out;
  std::map<Var, std::size_t> cls;
  for (std::size_t i = 0; i < span.size(); ++i) {
    if (i) out << "|";
    out << span[i]->pred << "/" << span[i]->args.size() << ":";
    for (std::size_t k = 0; k < span[i]->args.size(); ++k) {
      if (k) out << ",";
      const LinearTerm& arg = span[i]->args[k];
      if (auto v = arg.as_var()) {
        auto [it, inserted] = cls.emplace(*v, cls.size());
        (void)inserted;
        out << "v" << it->second;
      } else {
        out << "c" << to_string(arg);
      }
    }
  }
  return out.str();
}

struct Engine {
  TransformState& s;
  GenMode gen;
  std::size_t max_unfold;
  bool polyvariant;
  std::size_t version_cap;
  bool pairing;
  std::set<std::string> original_preds;  // atoms of these predicates get folded
  std::set<std::string> pred_names;      // for fresh definition names
  std::map<std::string, std::vector<std::size_t>> versions;  // skeleton -> defs
  std::map<std::size_t, std::string> def_key;
  std::deque<std::size_t> worklist;
  std::set<std::size_t> queued;
  std::size_t defines_left = 4096;

  Engine(TransformState& state, GenMode g, std::size_t mu, bool poly, std::size_t cap, bool pair)
      : s(state), gen(g), max_unfold(mu), polyvariant(poly), version_cap(cap), pairing(pair) {}

  void enqueue(std::size_t j) {
    if (queued.insert(j).second) worklist.push_back(j);
  }

  static std::vector<Var> span_tuple(const std::vector<const Atom*>& span) {
    std::vector<Var> tuple;
    std::set<Var> seen;
    for (const Atom* a : span)
      for (const LinearTerm& arg : a->args)
        if (auto v = arg.as_var())
          if (seen.insert(*v).second) tuple.push_back(*v);
    return tuple;
  }

  // Positional variable map between a span and a definition with the same
  // skeleton. Consistent by construction.
  static std::map<Var, LinearTerm> arg_map(const std::vector<const Atom*>& from,
                                           const std::vector<Atom>& to) {
    std::map<Var, LinearTerm> m;
    for (std::size_t i = 0; i < from.size(); ++i)
      for (std::size_t k = 0; k < from[i]->args.size(); ++k) {
        auto fv = from[i]->args[k].as_var();
        auto tv = to[i].args[k].as_var();
        if (fv && tv) m.emplace(*fv, LinearTerm::var(*tv));
      }
    return m;
  }

  std::size_t make_def(const std::vector<const Atom*>& span, const std::string& key,
                       const LinearConstraint& cand, std::size_t parent) {
    if (defines_left-- == 0)
      throw TransformError("specialisation diverged: definition budget exhausted");
    std::string base;
    if (span.size() == 1)
      base = "s" + span[0]->pred;
    else
      for (const Atom* a : span) base += a->pred;
    std::string name = fresh_pred(base, pred_names);
    DefinitionClause d;
    d.head.pred = name;
    for (const Var& v : span_tuple(span)) d.head.args.push_back(LinearTerm::var(v));
    d.constr = cand;
    for (const Atom* a : span) d.body.push_back(*a);
    std::size_t j = define(s, d, parent);
    versions[key].push_back(j);
    def_key[j] = key;
    enqueue(j);
    return j;
  }

  void widen_def(std::size_t j, const LinearConstraint& cand_def, std::size_t cur, bool* aborted) {
    const LinearConstraint& old = s.defs[j].def.constr;
    LinearConstraint against =
        gen == GenMode::HullWiden ? convex_hull(old, cand_def) : cand_def;
    generalise(s, j, widen(old, against));
    queued.erase(j);
    enqueue(j);
    if (j == cur) *aborted = true;
  }

  // Chooses (creating or widening as needed) the definition to fold the
  // span with. Sets *aborted when the currently processed definition was
  // widened, which retracts the clauses being iterated.
  std::size_t fold_target(const Clause& cl, const std::vector<std::size_t>& positions,
                          std::size_t parent, std::size_t cur, bool* aborted) {
    std::vector<const Atom*> span;
    for (std::size_t p : positions) span.push_back(&cl.body[p]);
    std::string key = skeleton_of(span);
    std::vector<Var> tuple = span_tuple(span);
    VarSet tupleset(tuple.begin(), tuple.end());
    LinearConstraint cand = simplify(proj(cl.constr, tupleset));

    auto entails_def = [&](std::size_t j) {
      std::map<Var, LinearTerm> to_target = arg_map(
          [&] {
            std::vector<const Atom*> db;
            for (const Atom& a : s.defs[j].def.body) db.push_back(&a);
            return db;
          }(),
          [&] {
            std::vector<Atom> ta;
            for (const Atom* a : span) ta.push_back(*a);
            return ta;
          }());
      return entail(cl.constr, s.defs[j].def.constr.substituted(to_target));
    };
    auto cand_in_def_space = [&](std::size_t j) {
      return cand.substituted(arg_map(span, s.defs[j].def.body));
    };

    auto it = versions.find(key);
    if (!polyvariant) {
      if (it == versions.end() || it->second.empty())
        return make_def(span, key, cand, parent);
      std::size_t j = it->second.front();
      if (entails_def(j)) return j;
      widen_def(j, cand_in_def_space(j), cur, aborted);
      return j;
    }

    // Polyvariant: prefer the ancestor chain, then creation order.
    std::vector<std::size_t> ordered;
    std::set<std::size_t> in_ordered;
    for (std::size_t a = parent; a != kNoId; a = s.defs[a].parent) {
      auto dk = def_key.find(a);
      if (dk != def_key.end() && dk->second == key && in_ordered.insert(a).second)
        ordered.push_back(a);
    }
    if (it != versions.end())
      for (std::size_t j : it->second)
        if (in_ordered.insert(j).second) ordered.push_back(j);

    for (std::size_t j : ordered)
      if (equivalent(cand_in_def_space(j), s.defs[j].def.constr)) return j;
    std::size_t have = it == versions.end() ? 0 : it->second.size();
    if (have < version_cap) return make_def(span, key, cand, parent);
    for (std::size_t j : ordered)
      if (entails_def(j)) return j;
    std::size_t j = ordered.front();
    widen_def(j, cand_in_def_space(j), cur, aborted);
    return j;
  }

  int leftmost_original(const Clause& cl) const {
    for (std::size_t i = 0; i < cl.body.size(); ++i)
      if (original_preds.count(cl.body[i].pred)) return static_cast<int>(i);
    return -1;
  }

  // Folds every original-predicate atom of the clause, pair spans first for
  // pair definitions. Returns false when the current definition was widened.
  bool fold_leaf(std::size_t clause_id, std::size_t cur) {
    normalise_clause(s, clause_id);
    for (;;) {
      Clause cl = s.clause(clause_id);
      std::vector<std::size_t> span;
      if (pairing && cur != kNoId && s.defs[cur].def.body.size() == 2) {
        const std::string& pa = s.defs[cur].def.body[0].pred;
        const std::string& pb = s.defs[cur].def.body[1].pred;
        int i = -1, j = -1;
        for (std::size_t k = 0; k < cl.body.size() && i < 0; ++k)
          if (cl.body[k].pred == pa) i = static_cast<int>(k);
        for (std::size_t k = 0; k < cl.body.size() && j < 0; ++k)
          if (cl.body[k].pred == pb && static_cast<int>(k) != i) j = static_cast<int>(k);
        if (i >= 0 && j >= 0) span = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
      if (span.empty()) {
        int i = leftmost_original(cl);
        if (i < 0) break;
        span = {static_cast<std::size_t>(i)};
      }
      bool aborted = false;
      std::size_t j = fold_target(cl, span, cur, cur, &aborted);
      if (aborted) return false;
      fold(s, clause_id, span, j);
    }
    return true;
  }

  // One processing round for a definition: unfold its body positions left
  // to right, then fold all resolvents back onto definitions.
  bool process(std::size_t j) {
    // a widening may have retracted this definition after it was queued
    if (!s.is_live(s.defs[j].clause_id)) return true;
    std::size_t k = s.defs[j].def.body.size();
    std::size_t levels = std::min(k, max_unfold);
    std::vector<std::size_t> frontier{s.defs[j].clause_id};
    for (std::size_t l = 0; l < levels; ++l) {
      std::vector<std::size_t> next;
      for (std::size_t id : frontier) {
        std::size_t pos = s.clause(id).body.size() - (k - l);
        auto made = unfold(s, id, pos);
        next.insert(next.end(), made.begin(), made.end());
      }
      frontier = std::move(next);
    }
    for (std::size_t id : frontier)
      if (!fold_leaf(id, j)) return false;
    return true;
  }

  void run() {
    std::size_t rounds = 0;
    while (!worklist.empty()) {
      if (++rounds > 100000)
        throw TransformError("specialisation diverged: processing budget exhausted");
      std::size_t j = worklist.front();
      worklist.pop_front();
      queued.erase(j);
      process(j);
    }
  }

  // Goals whose atoms have no defining clauses can never fire; unfolding
  // such an atom deletes the goal.
  void drop_dead_goals() {
    for (bool acted = true; acted;) {
      acted = false;
      std::set<std::string> defined;
      for (const Clause& c : s.program.clauses)
        if (c.head) defined.insert(c.head->pred);
      for (std::size_t i = 0; i < s.program.clauses.size() && !acted; ++i) {
        const Clause& c = s.program.clauses[i];
        if (!c.is_goal()) continue;
        for (std::size_t p = 0; p < c.body.size(); ++p) {
          if (!defined.count(c.body[p].pred)) {
            unfold(s, s.ids[i], p);
            acted = true;
            break;
          }
        }
      }
    }
  }

  void finalise() {
    run();
    drop_dead_goals();
    delete_clauses(s, DeleteMode::UnsatBody);
    delete_clauses(s, DeleteMode::Useless);
    theorem1_audit(s);
  }
};

}  // namespace

TransformState specialise(const Program& p, const SpecialiseOptions& opt) {
  TransformState st = make_state(p, opt.budget);
  Engine e(st, opt.gen, opt.max_unfold, opt.polyvariant, opt.version_cap, /*pairing=*/false);
  e.original_preds = occurring_preds(p);
  e.pred_names = e.original_preds;
  e.pred_names.insert(kFalseHead);

  std::vector<std::size_t> goal_ids;
  for (std::size_t i = 0; i < st.program.clauses.size(); ++i)
    if (st.program.clauses[i].is_goal()) goal_ids.push_back(st.ids[i]);
  for (std::size_t gid : goal_ids) {
    normalise_clause(st, gid);
    for (;;) {
      Clause g = st.clause(gid);
      int i = e.leftmost_original(g);
      if (i < 0) break;
      bool aborted = false;
      std::size_t j =
          e.fold_target(g, {static_cast<std::size_t>(i)}, kNoId, kNoId, &aborted);
      fold(st, gid, {static_cast<std::size_t>(i)}, j);
    }
  }
  e.finalise();
  return st;
}

TransformState predicate_pair(const Program& p, const PairOptions& opt) {
  TransformState st = make_state(p, opt.budget);
  Engine e(st, opt.gen, opt.max_unfold, /*polyvariant=*/false, /*version_cap=*/8,
           /*pairing=*/true);
  e.original_preds = occurring_preds(p);
  e.pred_names = e.original_preds;
  e.pred_names.insert(kFalseHead);

  std::vector<std::size_t> goal_ids;
  for (std::size_t i = 0; i < st.program.clauses.size(); ++i)
    if (st.program.clauses[i].is_goal()) goal_ids.push_back(st.ids[i]);
  if (goal_ids.empty()) throw TransformError("predicate pairing requires a goal");

  for (std::size_t gid : goal_ids) {
    normalise_clause(st, gid);
    // Inline single-clause non-recursive wrappers so the paired predicates
    // are conjoined directly in the goal.
    std::set<std::string> inlined;
    for (bool live = true; live;) {
      const Clause& g = st.clause(gid);
      int w = -1;
      for (std::size_t pos = 0; pos < g.body.size() && w < 0; ++pos) {
        const std::string& q = g.body[pos].pred;
        if (inlined.count(q)) continue;
        std::vector<const Clause*> defining;
        for (const Clause& c : st.program.clauses)
          if (c.head && c.head->pred == q) defining.push_back(&c);
        if (defining.size() == 1 && defining[0]->body.size() == 1 &&
            defining[0]->body[0].pred != q)
          w = static_cast<int>(pos);
      }
      if (w < 0) break;
      inlined.insert(st.clause(gid).body[static_cast<std::size_t>(w)].pred);
      auto made = unfold(st, gid, static_cast<std::size_t>(w));
      if (made.empty()) {
        live = false;
        gid = kNoId;
        break;
      }
      gid = made[0];
      normalise_clause(st, gid);
    }
    if (gid == kNoId) continue;

    Clause g = st.clause(gid);
    std::size_t i = 0, j = 0;
    if (opt.atoms) {
      i = opt.atoms->first;
      j = opt.atoms->second;
      if (i == j || i >= g.body.size() || j >= g.body.size())
        throw TransformError("invalid atom pair selection");
    } else {
      bool found = false;
      for (std::size_t a = 0; a < g.body.size() && !found; ++a) {
        VarSet va = g.body[a].vars();
        for (std::size_t b = a + 1; b < g.body.size() && !found; ++b) {
          for (const Var& v : g.body[b].vars()) {
            if (va.count(v)) {
              i = a;
              j = b;
              found = true;
              break;
            }
          }
        }
      }
      if (!found) {
        if (g.body.size() < 2)
          throw TransformError("predicate pairing requires a goal with at least two atoms");
        i = 0;
        j = 1;
      }
    }
    bool aborted = false;
    std::size_t d = e.fold_target(g, {i, j}, kNoId, kNoId, &aborted);
    fold(st, gid, {i, j}, d);
    for (;;) {
      Clause g2 = st.clause(gid);
      int a = e.leftmost_original(g2);
      if (a < 0) break;
      std::size_t d2 =
          e.fold_target(g2, {static_cast<std::size_t>(a)}, kNoId, kNoId, &aborted);
      fold(st, gid, {static_cast<std::size_t>(a)}, d2);
    }
  }
  e.finalise();
  return st;
}

// ---------------------------------------------------------------------------
// Query-answer transformation.
// ---------------------------------------------------------------------------

Program qa_transform_named(const Program& p, std::size_t goal_index, QaNames& names) {
  std::vector<std::size_t> goal_at;
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    if (p.clauses[i].is_goal()) goal_at.push_back(i);
  if (goal_at.empty()) throw TransformError("the query-answer transformation requires a goal");
  if (goal_index >= goal_at.size())
    throw TransformError("goal index out of range: " + std::to_string(goal_index));
  for (std::size_t i : goal_at)
    if (p.clauses[i].body.empty())
      throw TransformError("the query-answer transformation requires goals with a body atom");

  // Wrap multi-atom goals so every goal has exactly one body atom.
  Program w = p;
  std::set<std::string> taken = occurring_preds(p);
  taken.insert(kFalseHead);
  for (std::size_t i : goal_at) {
    Clause& g = w.clauses[i];
    if (g.body.size() == 1) continue;
    std::string wp = fresh_pred("goal", taken);
    Clause helper;
    helper.head = Atom{wp, {}};
    helper.constr = g.constr;
    helper.body = g.body;
    g.constr = LinearConstraint();
    g.body = {Atom{wp, {}}};
    w.clauses.push_back(std::move(helper));
  }

  std::set<std::string> preds = occurring_preds(w);
  preds.erase(kFalseHead);
  for (const std::string& q : preds) {
    names.answer[q] = fresh_pred(q + "_a", taken);
    names.query[q] = fresh_pred(q + "_q", taken);
  }

  // Goal order: the selected goal first, the rest in program order.
  std::vector<std::size_t> goal_order{goal_at[goal_index]};
  for (std::size_t k = 0; k < goal_at.size(); ++k)
    if (k != goal_index) goal_order.push_back(goal_at[k]);

  Program out;
  out.mode = p.mode;
  for (std::size_t i : goal_order) {
    const Clause& g = w.clauses[i];
    Clause r;
    r.constr = g.constr;
    r.body = {Atom{names.answer[g.body[0].pred], g.body[0].args}};
    out.clauses.push_back(std::move(r));
  }
  for (const Clause& c : w.clauses) {
    if (c.is_goal()) continue;
    Clause a;
    a.head = Atom{names.answer[c.head->pred], c.head->args};
    a.constr = c.constr;
    a.body = {Atom{names.query[c.head->pred], c.head->args}};
    for (const Atom& b : c.body) a.body.push_back(Atom{names.answer[b.pred], b.args});
    out.clauses.push_back(std::move(a));
  }
  for (const Clause& c : w.clauses) {
    if (c.is_goal()) continue;
    for (std::size_t j = 0; j < c.body.size(); ++j) {
      Clause q;
      q.head = Atom{names.query[c.body[j].pred], c.body[j].args};
      q.constr = c.constr;
      q.body = {Atom{names.query[c.head->pred], c.head->args}};
      for (std::size_t t = 0; t < j; ++t)
        q.body.push_back(Atom{names.answer[c.body[t].pred], c.body[t].args});
      out.clauses.push_back(std::move(q));
    }
  }
  for (std::size_t i : goal_order) {
    const Clause& g = w.clauses[i];
    Clause seed;
    seed.head = Atom{names.query[g.body[0].pred], g.body[0].args};
    seed.constr = g.constr;
    out.clauses.push_back(std::move(seed));
  }
  return out;
}

Program qa_transform(const Program& p, std::size_t goal_index) {
  QaNames names;
  return qa_transform_named(p, goal_index, names);
}

// ---------------------------------------------------------------------------
// Reversal.
// ---------------------------------------------------------------------------

Program reverse(const Program& p) {
  // Atoms of predicates without defining clauses act like constraints and
  // stay in the body; only atoms of defined predicates take part in the
  // head/body swap.
  std::set<std::string> defined;
  for (const Clause& c : p.clauses)
    if (c.head) defined.insert(c.head->pred);

  Program out;
  out.mode = p.mode;
  for (const Clause& c : p.clauses) {
    int at = -1;
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (!defined.count(c.body[i].pred)) continue;
      if (at >= 0)
        throw TransformError(
            "reversal requires a linear program (at most one defined-predicate body atom)");
      at = static_cast<int>(i);
    }
    if (c.is_goal() && at < 0) {
      out.clauses.push_back(c);  // no defined atom: self-dual
      continue;
    }
    Clause r;
    r.constr = c.constr;
    for (std::size_t i = 0; i < c.body.size(); ++i)
      if (static_cast<int>(i) != at) r.body.push_back(c.body[i]);
    if (c.is_goal()) {
      r.head = c.body[static_cast<std::size_t>(at)];
    } else {
      if (at >= 0) r.head = c.body[static_cast<std::size_t>(at)];
      r.body.push_back(*c.head);
    }
    out.clauses.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Redundant argument filtering.
// ---------------------------------------------------------------------------

namespace {

using PredPos = std::pair<std::string, std::size_t>;

std::set<PredPos> all_positions(const Program& p) {
  std::set<PredPos> out;
  for (const Clause& c : p.clauses) {
    if (c.head)
      for (std::size_t i = 0; i < c.head->args.size(); ++i) out.insert({c.head->pred, i});
    for (const Atom& a : c.body)
      for (std::size_t i = 0; i < a.args.size(); ++i) out.insert({a.pred, i});
  }
  return out;
}

Program erase_positions(const Program& p, const std::set<PredPos>& erased_set) {
  std::map<std::string, std::set<std::size_t>> erased;
  for (const auto& [q, i] : erased_set) erased[q].insert(i);
  std::set<std::string> avoid = occurring_preds(p);
  std::set<std::string> assigned;
  std::map<std::string, std::string> renamed;
  for (const auto& [q, positions] : erased)
    if (!positions.empty()) renamed[q] = renumber_pred(q, avoid, assigned);

  auto rewrite = [&](const Atom& a) {
    auto it = erased.find(a.pred);
    if (it == erased.end()) return a;
    Atom out;
    out.pred = renamed.at(a.pred);
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!it->second.count(i)) out.args.push_back(a.args[i]);
    return out;
  };

  Program out;
  out.mode = p.mode;
  for (const Clause& c : p.clauses) {
    Clause r;
    if (c.head) r.head = rewrite(*c.head);
    r.constr = c.constr;
    for (const Atom& a : c.body) r.body.push_back(rewrite(a));
    out.clauses.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Program raf(const Program& p, std::size_t goal_index) {
  std::size_t goals = 0;
  for (const Clause& c : p.clauses) goals += c.is_goal() ? 1 : 0;
  if (goals == 0) throw TransformError("argument filtering requires a goal");
  if (goal_index >= goals)
    throw TransformError("goal index out of range: " + std::to_string(goal_index));

  // Greatest fixpoint: a position stays erasable while every call site
  // passes it a variable that occurs nowhere else in its clause, except at
  // head positions that are themselves erased.
  std::set<PredPos> e = all_positions(p);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Clause& c : p.clauses) {
      for (std::size_t ai = 0; ai < c.body.size(); ++ai) {
        const Atom& a = c.body[ai];
        for (std::size_t i = 0; i < a.args.size(); ++i) {
          if (!e.count({a.pred, i})) continue;
          auto v = a.args[i].as_var();
          bool safe = v.has_value();
          if (safe) {
            if (constr_mentions(c.constr, *v)) safe = false;
            for (std::size_t bi = 0; bi < c.body.size() && safe; ++bi)
              for (std::size_t k = 0; k < c.body[bi].args.size() && safe; ++k) {
                if (bi == ai && k == i) continue;
                if (term_mentions(c.body[bi].args[k], *v)) safe = false;
              }
            if (c.head)
              for (std::size_t k = 0; k < c.head->args.size() && safe; ++k) {
                if (e.count({c.head->pred, k})) continue;  // erased with the position
                if (term_mentions(c.head->args[k], *v)) safe = false;
              }
          }
          if (!safe) {
            e.erase({a.pred, i});
            changed = true;
          }
        }
      }
    }
  }
  return erase_positions(p, e);
}

Program far(const Program& p) {
  // Greatest fixpoint: a position stays erasable while every defining
  // clause binds it to a variable that occurs nowhere else in the clause,
  // except at body atom positions that are themselves erased.
  std::set<PredPos> e = all_positions(p);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Clause& c : p.clauses) {
      if (!c.head) continue;
      for (std::size_t i = 0; i < c.head->args.size(); ++i) {
        if (!e.count({c.head->pred, i})) continue;
        auto v = c.head->args[i].as_var();
        bool safe = v.has_value();
        if (safe) {
          if (constr_mentions(c.constr, *v)) safe = false;
          for (std::size_t k = 0; k < c.head->args.size() && safe; ++k) {
            if (k == i) continue;
            if (term_mentions(c.head->args[k], *v)) safe = false;
          }
          for (std::size_t bi = 0; bi < c.body.size() && safe; ++bi)
            for (std::size_t k = 0; k < c.body[bi].args.size() && safe; ++k) {
              if (e.count({c.body[bi].pred, k})) continue;  // erased with the position
              if (term_mentions(c.body[bi].args[k], *v)) safe = false;
            }
        }
        if (!safe) {
          e.erase({c.head->pred, i});
          changed = true;
        }
      }
    }
  }
  return erase_positions(p, e);
}

Program cleanup_constraints(const Program& p) {
  Program out = p;
  for (Clause& cl : out.clauses) {
    VarSet keep = cl.interface_vars();
    if (p.mode == DomainMode::Rational) {
      cl.constr = simplify(proj(cl.constr, keep));
      continue;
    }
    // Integer mode: eliminate one clause-local variable at a time, only
    // when elimination is exact over the integers (unit coefficients in
    // closed inequalities, no disequalities).
    LinearConstraint c = integer_tighten(cl.constr);
    for (;;) {
      VarSet cv = c.vars();
      std::optional<Var> pick;
      for (const Var& v : cv) {
        if (keep.count(v)) continue;
        bool ok = true;
        for (const AtomicConstraint& conj : c.conjuncts) {
          auto it = conj.expr.coeffs.find(v);
          if (it == conj.expr.coeffs.end() || it->second == 0) continue;
          if (conj.rel == Rel::Ne || conj.rel == Rel::Lt) {
            ok = false;
            break;
          }
          if (!(it->second == 1 || it->second == -1)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          pick = v;
          break;
        }
      }
      if (!pick) break;
      VarSet keep2 = cv;
      keep2.erase(*pick);
      c = integer_tighten(proj(c, keep2));
    }
    cl.constr = simplify(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constraint strengthening.
// ---------------------------------------------------------------------------

Program strengthen(const Program& p, const AnalysisConfig& cfg) {
  std::vector<std::size_t> goal_at;
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    if (p.clauses[i].is_goal()) goal_at.push_back(i);
  if (goal_at.empty()) return p;

  // Reduce to a single one-atom goal so the query-answer transformation
  // gives one call-reachability seed.
  Program wrapped;
  bool direct = goal_at.size() == 1 && p.clauses[goal_at[0]].body.size() == 1;
  if (direct) {
    wrapped = p;
  } else {
    wrapped.mode = p.mode;
    std::set<std::string> taken = occurring_preds(p);
    taken.insert(kFalseHead);
    std::string wp = fresh_pred("goal", taken);
    for (const Clause& c : p.clauses) {
      if (!c.is_goal()) {
        wrapped.clauses.push_back(c);
        continue;
      }
      Clause helper;
      helper.head = Atom{wp, {}};
      helper.constr = c.constr;
      helper.body = c.body;
      wrapped.clauses.push_back(std::move(helper));
    }
    Clause goal;
    goal.body = {Atom{wp, {}}};
    wrapped.clauses.push_back(std::move(goal));
  }

  QaNames names;
  Program qa = qa_transform_named(wrapped, 0, names);
  AnalysisResult res = cpa_lfp(qa, cfg);

  // d(q) over-approximates the derivable instances of q that the goal can
  // call; conjoining it anywhere q occurs preserves satisfiability exactly.
  auto answer_of = [&](const std::string& q) -> const std::string* {
    auto it = names.answer.find(q);
    return it == names.answer.end() ? nullptr : &it->second;
  };
  auto strengthen_atom = [&](const Atom& a) -> LinearConstraint {
    const std::string* an = answer_of(a.pred);
    if (!an) return LinearConstraint();
    auto inst = res.model.instantiate(Atom{*an, a.args});
    if (!inst) return LinearConstraint::falsum();
    return *inst;
  };

  Program out = p;
  for (Clause& c : out.clauses) {
    if (c.head) c.constr &= strengthen_atom(*c.head);
    for (const Atom& a : c.body) c.constr &= strengthen_atom(a);
    c.constr = simplify(c.constr);
  }
  return out;
}

}  // namespace chc
