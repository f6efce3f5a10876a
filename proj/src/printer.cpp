#include "chc/printer.hpp"

#include <sstream>

namespace chc {
namespace {

void append_monomial(std::ostringstream& out, const Rat& k, const Var& v, bool first) {
  Rat a = k < 0 ? Rat(-k) : k;
  if (first) {
    if (k < 0) out << "-";
  } else {
    out << (k < 0 ? " - " : " + ");
  }
  if (a != 1) out << to_string(a) << "*";
  out << v;
}

// Prints a term whose monomials all have positive coefficients (plus an
// optional nonnegative constant); used for the two sides of a relation.
std::string side_to_string(const std::map<Var, Rat>& coeffs, const Rat& constant) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [v, k] : coeffs) {
    append_monomial(out, k, v, first);
    first = false;
  }
  if (constant != 0 || first) {
    if (!first) out << " + ";
    out << to_string(constant);
  }
  return out.str();
}

}  // namespace

std::string to_string(const LinearTerm& t) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [v, k] : t.coeffs) {
    append_monomial(out, k, v, first);
    first = false;
  }
  if (t.constant != 0 || first) {
    if (!first) out << (t.constant < 0 ? " - " : " + ") << to_string(t.constant < 0 ? Rat(-t.constant) : t.constant);
    else out << to_string(t.constant);
  }
  return out.str();
}

std::string to_string(const AtomicConstraint& a) {
  // Split the normalised expr REL 0 into lhs REL rhs with positive
  // coefficients on both sides; flip to >=/> when the left side would be
  // empty or purely negative.
  std::map<Var, Rat> pos, neg;
  for (const auto& [v, k] : a.expr.coeffs) {
    if (k > 0)
      pos[v] = k;
    else
      neg[v] = -k;
  }
  Rat c = a.expr.constant;
  Rat lc = 0, rc = 0;
  (c > 0 ? lc : rc) = c > 0 ? c : -c;
  bool flip = pos.empty() && !(neg.empty() && lc == 0);
  std::string lhs = side_to_string(pos, lc);
  std::string rhs = side_to_string(neg, rc);
  const char* rel = "=";
  switch (a.rel) {
    case Rel::Eq: rel = "="; break;
    case Rel::Le: rel = flip ? ">=" : "=<"; break;
    case Rel::Lt: rel = flip ? ">" : "<"; break;
    case Rel::Ne: rel = "=\\="; break;
  }
  if (flip && (a.rel == Rel::Le || a.rel == Rel::Lt)) return rhs + rel + lhs;
  return lhs + rel + rhs;
}

std::string to_string(const LinearConstraint& c) {
  std::ostringstream out;
  for (size_t i = 0; i < c.conjuncts.size(); ++i) {
    if (i) out << ", ";
    out << to_string(c.conjuncts[i]);
  }
  return out.str();
}

std::string to_string(const Atom& a) {
  if (a.args.empty()) return a.pred;
  std::ostringstream out;
  out << a.pred << "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out << ",";
    out << to_string(a.args[i]);
  }
  out << ")";
  return out.str();
}

std::string to_string(const Clause& c) {
  std::ostringstream out;
  out << (c.head ? to_string(*c.head) : kFalseHead);
  bool have_body = !c.constr.is_top() || !c.body.empty();
  if (have_body) {
    out << " :- ";
    bool first = true;
    for (const auto& a : c.constr.conjuncts) {
      if (!first) out << ", ";
      out << to_string(a);
      first = false;
    }
    for (const auto& a : c.body) {
      if (!first) out << ", ";
      out << to_string(a);
      first = false;
    }
  }
  out << ".";
  return out.str();
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  if (p.mode == DomainMode::Rational) out << "% mode: rational\n";
  for (const auto& c : p.clauses) out << to_string(c) << "\n";
  return out.str();
}

}  // namespace chc
