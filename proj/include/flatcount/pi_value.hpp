#pragma once

#include <map>
#include <string>
#include <utility>

#include "flatcount/errors.hpp"
#include "flatcount/rational.hpp"

namespace flatcount {

// Laurent polynomial in pi over Rational: finite map exponent -> nonzero
// coefficient. Canonical form stores no zero coefficients, so structural
// equality is value equality.
class PiValue {
 public:
  PiValue() = default;
  PiValue(const Rational& r) {  // implicit: rationals embed as pi^0 terms
    if (r != 0) terms_[0] = r;
  }
  PiValue(long n) : PiValue(Rational(n)) {}

  static PiValue pi_power(int exponent, const Rational& coeff = 1) {
    PiValue v;
    if (coeff != 0) v.terms_[exponent] = coeff;
    return v;
  }

  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_monomial() const { return terms_.size() == 1; }

  // Coefficient of pi^e (zero if absent).
  Rational coeff(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const PiValue& a, const PiValue& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const PiValue& a, const PiValue& b) {
    return !(a == b);
  }
  friend bool operator<(const PiValue& a, const PiValue& b) {
    return a.terms_ < b.terms_;  // arbitrary total order for sorted containers
  }

  PiValue operator-() const {
    PiValue r;
    for (auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }

  friend PiValue operator+(const PiValue& a, const PiValue& b) {
    PiValue r = a;
    for (auto& [e, c] : b.terms_) {
      auto it = r.terms_.find(e);
      if (it == r.terms_.end()) {
        r.terms_[e] = c;
      } else {
        it->second += c;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
    return r;
  }
  friend PiValue operator-(const PiValue& a, const PiValue& b) {
    return a + (-b);
  }
  friend PiValue operator*(const PiValue& a, const PiValue& b) {
    PiValue r;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) {
        int e = ea + eb;
        auto it = r.terms_.find(e);
        if (it == r.terms_.end()) {
          Rational c = ca * cb;
          if (c != 0) r.terms_[e] = std::move(c);
        } else {
          it->second += ca * cb;
          if (it->second == 0) r.terms_.erase(it);
        }
      }
    return r;
  }

  // Division is closed only for monomial divisors.
  friend PiValue operator/(const PiValue& a, const PiValue& b) {
    if (!b.is_monomial())
      throw InputError("PiValue division requires a nonzero monomial divisor");
    auto [e, c] = *b.terms_.begin();
    PiValue r;
    for (auto& [ea, ca] : a.terms_) r.terms_[ea - e] = ca / c;
    return r;
  }

  PiValue& operator+=(const PiValue& o) { return *this = *this + o; }
  PiValue& operator-=(const PiValue& o) { return *this = *this - o; }
  PiValue& operator*=(const PiValue& o) { return *this = *this * o; }
  PiValue& operator/=(const PiValue& o) { return *this = *this / o; }

  // "8/3*pi^4", "pi^4", "2*pi^2", "1/2*pi^-2", multi-term joined by " + ";
  // zero prints "0".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      auto& [e, c] = *it;
      std::string t;
      if (e == 0) {
        t = rational_pretty(c);
      } else {
        std::string p = "pi";
        if (e != 1) p += "^" + std::to_string(e);
        if (c == 1)
          t = p;
        else if (c == -1)
          t = "-" + p;
        else
          t = rational_pretty(c) + "*" + p;
      }
      out += first ? t : " + " + t;
      first = false;
    }
    return out;
  }

 private:
  std::map<int, Rational> terms_;
};

namespace detail {

// round(atan(1/x) * scale) up to a few ulps, by the alternating series.
inline BigInt atan_inv_scaled(long x, const BigInt& scale) {
  BigInt xx = BigInt(x) * x;
  BigInt power = scale / x;
  BigInt sum = power;
  bool neg = true;
  for (long k = 3; power != 0; k += 2, neg = !neg) {
    power /= xx;
    BigInt term = power / k;
    if (term == 0) break;
    sum += neg ? -term : term;
  }
  return sum;
}

// round(pi * 10^p) up to a few ulps (Machin's formula).
inline BigInt pi_scaled(long p) {
  BigInt scale = pow(BigInt(10), static_cast<unsigned>(p));
  return 16 * atan_inv_scaled(5, scale) - 4 * atan_inv_scaled(239, scale);
}

}  // namespace detail

// Fixed-point decimal with `digits` fractional digits, computed with >= 10
// guard digits of pi.
inline std::string to_decimal(const PiValue& x, int digits) {
  if (digits < 1) throw InputError("to_decimal: digits must be >= 1");
  long p = digits + 20;
  BigInt pi_num = detail::pi_scaled(p);
  BigInt pi_den = pow(BigInt(10), static_cast<unsigned>(p));
  Rational value = 0;
  for (auto& [e, c] : x.terms()) {
    Rational pw = 1;
    for (int i = 0; i < (e < 0 ? -e : e); ++i) pw *= Rational(pi_num, pi_den);
    if (e < 0) pw = 1 / pw;
    value += c * pw;
  }
  bool neg = value < 0;
  if (neg) value = -value;
  BigInt scale = pow(BigInt(10), static_cast<unsigned>(digits));
  // round half away from zero
  BigInt scaled = (num(value) * scale * 2 + den(value)) / (den(value) * 2);
  BigInt ip = scaled / scale, fp = scaled % scale;
  std::string frac = fp.str();
  frac.insert(0, static_cast<size_t>(digits) - frac.size(), '0');
  return (neg && scaled != 0 ? "-" : "") + ip.str() + "." + frac;
}

}  // namespace flatcount
