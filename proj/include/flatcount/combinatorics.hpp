#pragma once

#include <vector>

#include "flatcount/errors.hpp"
#include "flatcount/rational.hpp"

namespace flatcount {

inline BigInt factorial(long n) {
  if (n < 0) throw InputError("factorial of negative integer");
  BigInt r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

// n!! with the conventions (-1)!! = 0!! = 1.
inline BigInt double_factorial(long n) {
  if (n < -1) throw InputError("double factorial defined only for n >= -1");
  BigInt r = 1;
  for (long i = n; i >= 2; i -= 2) r *= i;
  return r;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);  // exact: r is always a binomial coefficient
  }
  return r;
}

// Multinomial with an implicit last part: n! / (k_1!...k_m!(n - sum k_i)!).
inline BigInt multinomial(long n, const std::vector<long>& parts) {
  if (n < 0) throw InputError("multinomial: n < 0");
  long s = 0;
  for (long p : parts) {
    if (p < 0) throw InputError("multinomial: negative part");
    s += p;
  }
  if (s > n) throw InputError("multinomial: parts sum exceeds n");
  BigInt r = factorial(n) / factorial(n - s);
  for (long p : parts) r /= factorial(p);
  return r;
}

// All partitions of n as weakly decreasing part lists (n >= 0).
inline std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int maxp) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rem, maxp); p >= 1; --p) {
      cur.push_back(p);
      self(self, rem - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

}  // namespace flatcount
