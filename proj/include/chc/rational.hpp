// Exact rational arithmetic used throughout the toolkit. No floating point.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace chc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

// Smallest integer >= r.
inline Int rat_ceil(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (rat_num(r) > 0 && q * rat_den(r) != rat_num(r)) ++q;
  return q;
}

inline std::string to_string(const Rat& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

}  // namespace chc
