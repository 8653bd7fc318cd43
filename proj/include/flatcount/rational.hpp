#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "flatcount/errors.hpp"

namespace flatcount {

using BigInt = boost::multiprecision::cpp_int;

// Always reduced, denominator > 0; zero is 0/1. cpp_rational maintains
// exactly this canonical form.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return numerator(r); }
inline BigInt den(const Rational& r) { return denominator(r); }

// "p", "-p", or "p/q".
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(p) / q;  // handles negative q, unlike the (p, q) ctor
  } catch (const std::runtime_error&) {
    throw InputError("bad rational literal '" + s + "'");
  }
}

// Canonical machine form: always "p/q", including q = 1.
inline std::string rational_str(const Rational& r) {
  return num(r).str() + "/" + den(r).str();
}

// Human form: omit "/1".
inline std::string rational_pretty(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

}  // namespace flatcount
