#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace cert {

/// Exact nonnegative-or-signed rational; all probabilities, weights and
/// expected costs in the discrete engines use this type.
using Rational = mpq_class;

/// Parses "a", "a/b" or a finite decimal "a.bcd". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "a/b" rendering (or "a" when the denominator is 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

std::size_t hash_rational(const Rational& q);

/// q when its denominator fits in bits + 1 binary digits, otherwise the
/// largest multiple of 2^-bits that is ≤ q.
Rational floor_dyadic(const Rational& q, std::size_t bits);

inline Rational rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace cert
