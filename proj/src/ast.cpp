#include "chc/ast.hpp"

#include <algorithm>

namespace chc {

LinearTerm& LinearTerm::operator+=(const LinearTerm& o) {
  for (const auto& [v, k] : o.coeffs) {
    Rat& c = coeffs[v];
    c += k;
    if (c == 0) coeffs.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& o) {
  for (const auto& [v, k] : o.coeffs) {
    Rat& c = coeffs[v];
    c -= k;
    if (c == 0) coeffs.erase(v);
  }
  constant -= o.constant;
  return *this;
}

LinearTerm& LinearTerm::operator*=(const Rat& k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs) c *= k;
  constant *= k;
  return *this;
}

void LinearTerm::collect_vars(VarSet& out) const {
  for (const auto& [v, _] : coeffs) out.insert(v);
}

VarSet LinearTerm::vars() const {
  VarSet s;
  collect_vars(s);
  return s;
}

LinearTerm LinearTerm::substituted(const std::map<Var, LinearTerm>& sub) const {
  LinearTerm out;
  out.constant = constant;
  for (const auto& [v, k] : coeffs) {
    auto it = sub.find(v);
    if (it == sub.end()) {
      Rat& c = out.coeffs[v];
      c += k;
      if (c == 0) out.coeffs.erase(v);
    } else {
      LinearTerm scaled = it->second;
      scaled *= k;
      out += scaled;
    }
  }
  return out;
}

Rat LinearTerm::evaluate(const std::map<Var, Rat>& assign) const {
  Rat r = constant;
  for (const auto& [v, k] : coeffs) r += k * assign.at(v);
  return r;
}

std::optional<bool> AtomicConstraint::ground_value() const {
  if (!expr.is_constant()) return std::nullopt;
  const Rat& c = expr.constant;
  switch (rel) {
    case Rel::Eq: return c == 0;
    case Rel::Le: return c <= 0;
    case Rel::Lt: return c < 0;
    case Rel::Ne: return c != 0;
  }
  return std::nullopt;
}

AtomicConstraint AtomicConstraint::normalised() const {
  AtomicConstraint out = *this;
  if (out.expr.coeffs.empty()) return out;
  // Scale so all coefficients and the constant become integers.
  Int lcm_den = 1;
  for (const auto& [v, k] : out.expr.coeffs) lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(k));
  lcm_den = boost::multiprecision::lcm(lcm_den, rat_den(out.expr.constant));
  Int gcd_num = 0;
  for (const auto& [v, k] : out.expr.coeffs) gcd_num = boost::multiprecision::gcd(gcd_num, rat_num(k * Rat(lcm_den)));
  if (gcd_num == 0) gcd_num = 1;
  Rat scale = Rat(lcm_den) / Rat(gcd_num);
  out.expr *= scale;
  if ((out.rel == Rel::Eq || out.rel == Rel::Ne) && !out.expr.coeffs.empty() &&
      out.expr.coeffs.begin()->second < 0) {
    out.expr *= Rat(-1);
  }
  return out;
}

AtomicConstraint AtomicConstraint::substituted(const std::map<Var, LinearTerm>& sub) const {
  return AtomicConstraint(expr.substituted(sub), rel);
}

LinearConstraint LinearConstraint::falsum() {
  LinearConstraint c;
  c.add(AtomicConstraint(LinearTerm(Rat(1)), Rel::Eq));
  return c;
}

bool LinearConstraint::has_ground_false() const {
  return std::any_of(conjuncts.begin(), conjuncts.end(), [](const AtomicConstraint& a) {
    auto g = a.ground_value();
    return g.has_value() && !*g;
  });
}

LinearConstraint& LinearConstraint::operator&=(const LinearConstraint& o) {
  conjuncts.insert(conjuncts.end(), o.conjuncts.begin(), o.conjuncts.end());
  return *this;
}

void LinearConstraint::collect_vars(VarSet& out) const {
  for (const auto& a : conjuncts) a.expr.collect_vars(out);
}

VarSet LinearConstraint::vars() const {
  VarSet s;
  collect_vars(s);
  return s;
}

LinearConstraint LinearConstraint::substituted(const std::map<Var, LinearTerm>& sub) const {
  LinearConstraint out;
  out.conjuncts.reserve(conjuncts.size());
  for (const auto& a : conjuncts) out.conjuncts.push_back(a.substituted(sub));
  return out;
}

void Atom::collect_vars(VarSet& out) const {
  for (const auto& t : args) t.collect_vars(out);
}

VarSet Atom::vars() const {
  VarSet s;
  collect_vars(s);
  return s;
}

Atom Atom::substituted(const std::map<Var, LinearTerm>& sub) const {
  Atom out;
  out.pred = pred;
  out.args.reserve(args.size());
  for (const auto& t : args) out.args.push_back(t.substituted(sub));
  return out;
}

VarSet Clause::vars() const {
  VarSet s;
  if (head) head->collect_vars(s);
  constr.collect_vars(s);
  for (const auto& a : body) a.collect_vars(s);
  return s;
}

VarSet Clause::head_vars() const {
  VarSet s;
  if (head) head->collect_vars(s);
  return s;
}

VarSet Clause::interface_vars() const {
  VarSet s;
  if (head) head->collect_vars(s);
  for (const auto& a : body) a.collect_vars(s);
  return s;
}

Clause Clause::substituted(const std::map<Var, LinearTerm>& sub) const {
  Clause out;
  if (head) out.head = head->substituted(sub);
  out.constr = constr.substituted(sub);
  out.body.reserve(body.size());
  for (const auto& a : body) out.body.push_back(a.substituted(sub));
  return out;
}

std::set<std::string> Program::predicates() const {
  std::set<std::string> s;
  for (const auto& c : clauses) {
    if (c.head) s.insert(c.head->pred);
    for (const auto& a : c.body) s.insert(a.pred);
  }
  return s;
}

std::set<std::string> Program::defined_predicates() const {
  std::set<std::string> s;
  for (const auto& c : clauses)
    if (c.head) s.insert(c.head->pred);
  return s;
}

std::vector<const Clause*> Program::clauses_for(const std::string& pred) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses)
    if (c.head && c.head->pred == pred) out.push_back(&c);
  return out;
}

Var fresh_var(const Var& base, VarSet& avoid) {
  if (!avoid.count(base)) {
    avoid.insert(base);
    return base;
  }
  for (int i = 1;; ++i) {
    Var cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) {
      avoid.insert(cand);
      return cand;
    }
  }
}

Clause rename_apart(const Clause& c, const VarSet& avoid) {
  VarSet used = avoid;
  std::map<Var, LinearTerm> sub;
  for (const Var& v : c.vars()) {
    if (avoid.count(v)) {
      sub[v] = LinearTerm::var(fresh_var(v, used));
    } else {
      used.insert(v);
    }
  }
  if (sub.empty()) return c;
  return c.substituted(sub);
}

std::map<std::string, std::set<std::string>> dependency_relation(const Program& p) {
  std::map<std::string, std::set<std::string>> dep;
  for (const auto& c : p.clauses) {
    std::string h = c.head ? c.head->pred : kFalseHead;
    auto& row = dep[h];
    for (const auto& a : c.body) row.insert(a.pred);
  }
  // Transitive closure by iterated propagation; predicate counts are small.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [h, row] : dep) {
      std::set<std::string> add;
      for (const auto& q : row) {
        auto it = dep.find(q);
        if (it == dep.end()) continue;
        for (const auto& r : it->second)
          if (!row.count(r)) add.insert(r);
      }
      if (!add.empty()) {
        row.insert(add.begin(), add.end());
        changed = true;
      }
    }
  }
  return dep;
}

}  // namespace chc
