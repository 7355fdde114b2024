#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

#include "verigame/types.hpp"

namespace verigame::exact {

using Rational = boost::multiprecision::cpp_rational;

// The exact binary rational a finite double denotes. Inequality decisions
// must never flip due to rounding, so thresholds are compared on these.
inline Rational of_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);           // x = mant * 2^exp, |mant| in [0.5, 1)
  auto m = std::int64_t(std::ldexp(mant, 53)); // integral, |m| < 2^53
  exp -= 53;
  Rational r(m);
  boost::multiprecision::cpp_int two(1);
  two <<= (exp >= 0 ? exp : -exp);
  if (exp >= 0)
    r *= Rational(two);
  else
    r /= Rational(two);
  return r;
}

inline Rational of_amount(Amount a) { return Rational(a); }

}  // namespace verigame::exact
