#pragma once

#include <gmpxx.h>

#include <string>

namespace irs {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace irs
