#pragma once

#include <string>
#include <vector>

#include "flatcount/series.hpp"

namespace flatcount {

// Nonempty vector of integers >= 0 (degrees of zeros / marked points).
using DegreeVector = std::vector<int>;

namespace detail {
inline void check_degree_vector(const DegreeVector& d) {
  if (d.empty()) throw InputError("degree vector must be nonempty");
  for (int x : d)
    if (x < 0) throw InputError("degree vector entries must be >= 0");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Brute-force combinatorial identity:
//   (6 + Sum d_i(d_i+1)/(d_i+2)) * (1 + Sum (d_i+1))
//     = Sum over all 2^m subsets R of {1..m} of
//         binom(4 + Sum d, 2 + Sum_{R} d) / binom(Sum (d+1), Sum_{R} (d+1)).
// ---------------------------------------------------------------------------

struct Apr2012Report {
  DegreeVector d;
  Rational lhs, rhs;
  bool holds = false;
};

inline Apr2012Report verify_apr2012(const DegreeVector& d) {
  detail::check_degree_vector(d);
  const int m = static_cast<int>(d.size());
  long sum_d = 0, sum_b = 0;
  Rational corr = 0;
  for (int x : d) {
    sum_d += x;
    sum_b += x + 1;
    corr += Rational(static_cast<long>(x) * (x + 1), x + 2);
  }
  Apr2012Report rep;
  rep.d = d;
  rep.lhs = (Rational(6) + corr) * Rational(1 + sum_b);
  rep.rhs = 0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    long rd = 0, rb = 0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        rd += d[i];
        rb += d[i] + 1;
      }
    rep.rhs += Rational(binomial(4 + sum_d, 2 + rd)) /
               Rational(binomial(sum_b, rb));
  }
  rep.holds = (rep.lhs == rep.rhs);
  return rep;
}

// ---------------------------------------------------------------------------
// Mohanty coefficients and the fixed-point series z.
//   A(a; b; k) = a/(a + b.k) * (a + b.k)! / (k_1! ... k_m! (a + b.k - |k|)!)
//   z is the unique series with constant term 1 solving
//   1 - z + Sum_i s_i z^{b_i} = 0.
// ---------------------------------------------------------------------------

inline Rational mohanty_coefficient(long a, const std::vector<int>& b,
                                    const std::vector<int>& k) {
  if (a < 1) throw InputError("mohanty_coefficient: a must be >= 1");
  if (b.size() != k.size())
    throw InputError("mohanty_coefficient: length mismatch");
  long bk = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i] < 1) throw InputError("mohanty_coefficient: b entries must be >= 1");
    if (k[i] < 0) throw InputError("mohanty_coefficient: k entries must be >= 0");
    bk += static_cast<long>(b[i]) * k[i];
  }
  std::vector<long> parts(k.begin(), k.end());
  return Rational(a, a + bk) * Rational(multinomial(a + bk, parts));
}

inline TruncatedSeries solve_mohanty_z(const std::vector<int>& b, int D) {
  if (D < 1) throw InputError("solve_mohanty_z: D must be >= 1");
  const int m = static_cast<int>(b.size());
  for (int bi : b)
    if (bi < 1) throw InputError("solve_mohanty_z: b entries must be >= 1");
  TruncatedSeries z = TruncatedSeries::constant(m, D, 1);
  for (int iter = 0; iter < D; ++iter) {
    TruncatedSeries next = TruncatedSeries::constant(m, D, 1);
    for (int i = 0; i < m; ++i)
      next = next + TruncatedSeries::variable(m, D, i) * z.pow(b[i]);
    z = next;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Generating functions F and G, each computed two independent ways:
// a direct multinomial summation over exponent vectors, and a closed
// form in the fixed-point series z. The two must agree coefficientwise.
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<int> b_of(const DegreeVector& d) {
  std::vector<int> b;
  for (int x : d) b.push_back(x + 1);
  return b;
}
}  // namespace detail

inline TruncatedSeries series_F(const DegreeVector& d, int D) {
  detail::check_degree_vector(d);
  if (D < 2) throw InputError("series_F: D must be >= 2");
  const int m = static_cast<int>(d.size());
  const std::vector<int> b = detail::b_of(d);

  // direct summation: coeff of s^k is binom(2 + b.k; k) / ((1+b.k)(2+b.k))
  TruncatedSeries direct(m, D);
  for (const auto& k : exponent_vectors(m, D)) {
    long bk = 0;
    for (int i = 0; i < m; ++i) bk += static_cast<long>(b[i]) * k[i];
    std::vector<long> parts(k.begin(), k.end());
    Rational c = Rational(multinomial(bk + 2, parts)) /
                 Rational(BigInt(bk + 1) * (bk + 2));
    direct.set_coeff(k, c);
  }

  // closed form: F = Sum_i s_i/(d_i+2) z^{d_i+2} - z^2/2 + z
  TruncatedSeries z = solve_mohanty_z(b, D);
  TruncatedSeries closed =
      z - Rational(1, 2) * z.pow(2);
  for (int i = 0; i < m; ++i)
    closed = closed + Rational(1, d[i] + 2) *
                          (TruncatedSeries::variable(m, D, i) * z.pow(d[i] + 2));

  if (!(direct == closed))
    throw VerificationError("series_F: direct and closed forms disagree");
  return direct;
}

inline TruncatedSeries series_G(const DegreeVector& d, int D) {
  detail::check_degree_vector(d);
  if (D < 2) throw InputError("series_G: D must be >= 2");
  const int m = static_cast<int>(d.size());
  const std::vector<int> b = detail::b_of(d);

  // direct summation: coeff of s^k is
  //   (6 + Sum_i d_i(d_i+1)/(d_i+2) k_i)
  //   / ((2+b.k)(3+b.k)(4+b.k)) * binom(4 + b.k; k)
  TruncatedSeries direct(m, D);
  for (const auto& k : exponent_vectors(m, D)) {
    long bk = 0;
    Rational num = 6;
    for (int i = 0; i < m; ++i) {
      bk += static_cast<long>(b[i]) * k[i];
      num += Rational(static_cast<long>(d[i]) * (d[i] + 1), d[i] + 2) * k[i];
    }
    std::vector<long> parts(k.begin(), k.end());
    Rational c = num * Rational(multinomial(bk + 4, parts)) /
                 Rational(BigInt(bk + 2) * (bk + 3) * (bk + 4));
    direct.set_coeff(k, c);
  }

  // closed form:
  //   G = 3/4 z^2 - 1/2 z^3
  //     + 1/2 ( Sum_i d_i s_i z^{d_i+4}/(d_i+2)
  //           - Sum_i (d_i-2) s_i z^{d_i+3}/(d_i+2)
  //           - Sum_{i,j} d_i(d_i+4) s_i s_j z^{4+d_i+d_j}
  //                       / ((d_i+2)(4+d_i+d_j)) )
  TruncatedSeries z = solve_mohanty_z(b, D);
  TruncatedSeries closed =
      Rational(3, 4) * z.pow(2) - Rational(1, 2) * z.pow(3);
  TruncatedSeries inner(m, D);
  for (int i = 0; i < m; ++i) {
    TruncatedSeries si = TruncatedSeries::variable(m, D, i);
    inner = inner + Rational(d[i], d[i] + 2) * (si * z.pow(d[i] + 4));
    inner = inner - Rational(d[i] - 2, d[i] + 2) * (si * z.pow(d[i] + 3));
    for (int j = 0; j < m; ++j) {
      Rational cij(static_cast<long>(d[i]) * (d[i] + 4),
                   static_cast<long>(d[i] + 2) * (4 + d[i] + d[j]));
      if (cij == 0) continue;
      TruncatedSeries sj = TruncatedSeries::variable(m, D, j);
      inner = inner - cij * (si * sj * z.pow(4 + d[i] + d[j]));
    }
  }
  closed = closed + Rational(1, 2) * inner;

  if (!(direct == closed))
    throw VerificationError("series_G: direct and closed forms disagree");
  return direct;
}

struct F2GReport {
  DegreeVector d;
  int max_degree = 0;
  bool holds = false;
};

inline F2GReport verify_F2_equals_G(const DegreeVector& d, int D) {
  TruncatedSeries F = series_F(d, D);
  TruncatedSeries G = series_G(d, D);
  F2GReport rep;
  rep.d = d;
  rep.max_degree = D;
  rep.holds = (F * F - G).is_zero();
  return rep;
}

}  // namespace flatcount
