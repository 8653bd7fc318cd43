#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatcount/strata.hpp"

namespace flatcount {

// Saddle-connection configurations on a stratum. Singularities are referred
// to by their position in sig.orders() (named/labeled convention).

namespace detail {

inline void check_index(const StratumSignature& sig, int i) {
  if (i < 0 || i >= sig.size())
    throw InputError("singularity index out of range");
}

inline std::vector<int> orders_without(const StratumSignature& sig, int i,
                                       int j) {
  std::vector<int> o;
  for (int t = 0; t < sig.size(); ++t)
    if (t != i && t != j) o.push_back(sig.orders()[t]);
  return o;
}

}  // namespace detail

// --- Type I: connection joining two distinct singularities i, j ------------

// Closed form; both parities of (d_i, d_j) handled.
inline PiValue c_type1(const StratumSignature& sig, int i, int j) {
  detail::check_index(sig, i);
  detail::check_index(sig, j);
  if (i == j) throw InputError("type I requires two distinct singularities");
  int di = sig.orders()[i], dj = sig.orders()[j];
  Rational f(double_factorial(di + dj + 2) * double_factorial(di + 1) *
                 double_factorial(dj + 1),
             double_factorial(di + dj + 1) * double_factorial(di) *
                 double_factorial(dj));
  bool both_odd = (di % 2 != 0) && (dj % 2 != 0);
  return both_odd ? PiValue::pi_power(-2, 2 * f) : PiValue(f / 2);
}

// Volume-ratio form: (d_i+d_j+2) * Vol(merged) / Vol. Defined only when the
// merged singularity has order >= -1 (two simple poles merge to order -2,
// which is not a stratum singularity; the closed form still applies there).
inline std::optional<PiValue> c_type1_ratio(const StratumSignature& sig, int i,
                                            int j) {
  int di = sig.orders()[i], dj = sig.orders()[j];
  if (di + dj < -1) return std::nullopt;
  auto merged = detail::orders_without(sig, i, j);
  merged.push_back(di + dj);
  return PiValue(di + dj + 2) * volume(StratumSignature(merged)) / volume(sig);
}

// --- Type II: loop at a zero i of order d_i >= 2 splitting it into two -----

struct TypeIIConfig {
  StratumSignature sig;
  int i;                    // the zero emitting the loop, d_i >= 2
  int d_prime, d_dprime;    // newborn orders, d' + d'' = d_i - 4, both >= -1
  std::vector<int> side_a;  // indices of the remaining singularities, side a
  std::vector<int> side_b;  // ... side b (disjoint, covering all but i)
};

namespace detail {

inline std::pair<StratumSignature, StratumSignature> type2_sides(
    const TypeIIConfig& c) {
  check_index(c.sig, c.i);
  if (c.sig.orders()[c.i] < 2)
    throw InputError("type II requires a zero of order >= 2");
  if (c.d_prime < -1 || c.d_dprime < -1 ||
      c.d_prime + c.d_dprime != c.sig.orders()[c.i] - 4)
    throw InputError("type II split must satisfy d' + d'' = d_i - 4, d',d'' >= -1");
  std::vector<bool> seen(c.sig.size(), false);
  seen[c.i] = true;
  std::vector<int> oa{c.d_prime}, ob{c.d_dprime};
  for (int t : c.side_a) {
    check_index(c.sig, t);
    if (seen[t]) throw InputError("type II sides must be disjoint");
    seen[t] = true;
    oa.push_back(c.sig.orders()[t]);
  }
  for (int t : c.side_b) {
    check_index(c.sig, t);
    if (seen[t]) throw InputError("type II sides must be disjoint");
    seen[t] = true;
    ob.push_back(c.sig.orders()[t]);
  }
  for (bool s : seen)
    if (!s) throw InputError("type II sides must cover all singularities");
  return {StratumSignature(oa), StratumSignature(ob)};  // each validates sum -4
}

}  // namespace detail

inline PiValue c_type2(const TypeIIConfig& c) {
  detail::type2_sides(c);  // validate
  int di = c.sig.orders()[c.i];
  long k1 = static_cast<long>(c.side_a.size());
  long k2 = static_cast<long>(c.side_b.size());
  long k = c.sig.size();
  Rational f(double_factorial(c.d_prime + 2) * double_factorial(c.d_dprime + 2) *
                 double_factorial(di + 1),
             double_factorial(c.d_prime + 1) * double_factorial(c.d_dprime + 1) *
                 double_factorial(di));
  f /= 8;
  f *= Rational(factorial(k1 - 2) * factorial(k2 - 2), factorial(k - 4));
  bool both_odd = (c.d_prime % 2 != 0) && (c.d_dprime % 2 != 0);
  return both_odd ? PiValue(f) : PiValue::pi_power(-2, 4 * f);
}

inline PiValue c_type2_ratio(const TypeIIConfig& c) {
  auto [sa, sb] = detail::type2_sides(c);
  long dim = c.sig.dimension();
  Rational f(factorial(sa.dimension() - 1) * factorial(sb.dimension() - 1),
             factorial(dim - 2));
  f *= Rational((c.d_prime + 2) * (c.d_dprime + 2), 8);
  return PiValue(f) * volume(sa) * volume(sb) / volume(c.sig);
}

// --- Type III: pocket at zero i (boundary: a fixed pair of simple poles) ---

inline PiValue c_pocket(const StratumSignature& sig, int i) {
  detail::check_index(sig, i);
  int di = sig.orders()[i];
  if (di < 1) throw InputError("pocket requires a zero of order >= 1");
  if (sig.poles() < 2) throw InputError("pocket requires two simple poles");
  long k = sig.size();
  return PiValue::pi_power(-2, Rational(di + 1, 2 * (k - 4)));
}

// Boundary stratum: the loop's zero degrades by 2 and the two distinguished
// poles (swallowed with the pocket) disappear.
inline PiValue c_pocket_ratio(const StratumSignature& sig, int i) {
  int di = sig.orders()[i];
  std::vector<int> degraded;
  int poles_dropped = 0;
  for (int t = 0; t < sig.size(); ++t) {
    if (t == i) {
      degraded.push_back(di - 2);
    } else if (sig.orders()[t] == -1 && poles_dropped < 2) {
      ++poles_dropped;
    } else {
      degraded.push_back(sig.orders()[t]);
    }
  }
  Rational f(di, 2 * (sig.dimension() - 2));
  return PiValue(f) * volume(StratumSignature(degraded)) / volume(sig);
}

// Summed over all zeros: identically 1/(2 pi^2) on strata without marked
// points.
inline PiValue c_pocket_total(const StratumSignature& sig) {
  if (sig.marked_points() > 0)
    throw InputError("c_pocket_total assumes no marked points");
  PiValue total;
  for (int i = 0; i < sig.size(); ++i)
    if (sig.orders()[i] >= 1) total += c_pocket(sig, i);
  if (total.is_zero())
    throw InputError("c_pocket_total: no zero of order >= 1 in " + sig.str());
  return total;
}

// --- Type IV: dumbbell between loops at zeros i (side a) and j (side b) ----

struct DumbbellConfig {
  StratumSignature sig;
  int i, j;                 // boundary zeros, orders >= 1, i in a, j in b
  std::vector<int> side_a;  // indices, including i; side_b is the complement
  std::vector<int> side_b;  // indices, including j
};

namespace detail {

inline std::pair<StratumSignature, StratumSignature> dumbbell_sides(
    const DumbbellConfig& c) {
  check_index(c.sig, c.i);
  check_index(c.sig, c.j);
  if (c.sig.orders()[c.i] < 1 || c.sig.orders()[c.j] < 1)
    throw InputError("dumbbell boundary zeros must have order >= 1");
  std::vector<bool> seen(c.sig.size(), false);
  std::vector<int> oa, ob;
  bool i_in_a = false, j_in_b = false;
  for (int t : c.side_a) {
    check_index(c.sig, t);
    if (seen[t]) throw InputError("dumbbell sides must be disjoint");
    seen[t] = true;
    i_in_a |= (t == c.i);
    oa.push_back(c.sig.orders()[t] - (t == c.i ? 2 : 0));
  }
  for (int t : c.side_b) {
    check_index(c.sig, t);
    if (seen[t]) throw InputError("dumbbell sides must be disjoint");
    seen[t] = true;
    j_in_b |= (t == c.j);
    ob.push_back(c.sig.orders()[t] - (t == c.j ? 2 : 0));
  }
  for (bool s : seen)
    if (!s) throw InputError("dumbbell sides must cover all singularities");
  if (!i_in_a || !j_in_b)
    throw InputError("dumbbell boundary zeros must lie on their sides");
  return {StratumSignature(oa), StratumSignature(ob)};
}

}  // namespace detail

inline PiValue c_dumbbell(const DumbbellConfig& c) {
  detail::dumbbell_sides(c);  // validate
  int di = c.sig.orders()[c.i], dj = c.sig.orders()[c.j];
  long k1 = static_cast<long>(c.side_a.size());
  long k2 = static_cast<long>(c.side_b.size());
  long k = c.sig.size();
  Rational f(BigInt(di + 1) * (dj + 1) * factorial(k1 - 3) * factorial(k2 - 3),
             2 * factorial(k - 4));
  return PiValue::pi_power(-2, f);
}

inline PiValue c_dumbbell_ratio(const DumbbellConfig& c) {
  auto [sa, sb] = detail::dumbbell_sides(c);
  int di = c.sig.orders()[c.i], dj = c.sig.orders()[c.j];
  Rational f(BigInt(di) * dj *
                 factorial(sa.dimension() - 1) * factorial(sb.dimension() - 1),
             4 * factorial(c.sig.dimension() - 2));
  return PiValue(f) * volume(sa) * volume(sb) / volume(c.sig);
}

// --- c_area, Vorobets ratio, and the volume-recursion identity -------------

inline PiValue c_area(const StratumSignature& sig) {
  if (sig.marked_points() > 0)
    throw InputError("c_area assumes no marked points");
  Rational s = 0;
  for (int d : sig.orders()) s += Rational(d * (d + 4), d + 2);
  return PiValue::pi_power(-2, -s / 8);
}

// c_area / c for configurations involving a cylinder: 1/(n-3).
inline PiValue vorobets_ratio(const StratumSignature& sig) {
  long n = sig.size();
  if (n < 4) throw InputError("vorobets_ratio needs n >= 4");
  return PiValue(Rational(1, n - 3));
}

struct CareaIdentityReport {
  StratumSignature sig;
  PiValue lhs, rhs;
  bool holds = false;
  long pockets = 0, dumbbells = 0;
  std::string diagnostic;
};

// c_area = 1/(k-3) * (sum over pocket configs + sum over dumbbell configs).
// Pockets: (zero i, unordered pair of simple poles). Dumbbells: unordered
// partitions of the named singularities into two sides with a designated
// boundary zero per side, both contracted sides summing to -4.
inline CareaIdentityReport verify_carea_identity(const StratumSignature& sig) {
  if (sig.marked_points() > 0)
    throw InputError("identity is stated for strata without marked points");
  CareaIdentityReport rep;
  rep.sig = sig;
  rep.lhs = c_area(sig);
  int k = sig.size();
  long n = sig.poles();
  PiValue sum;
  // pockets
  for (int i = 0; i < k; ++i)
    if (sig.orders()[i] >= 1) {
      long pairs_of_poles = n * (n - 1) / 2;
      sum += PiValue(Rational(pairs_of_poles)) * c_pocket(sig, i);
      rep.pockets += pairs_of_poles;
    }
  // dumbbells: fix singularity 0 on side a so each unordered partition is
  // visited once
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    if (!(mask & 1u)) continue;
    std::vector<int> a, b;
    long sum_a = 0;
    for (int t = 0; t < k; ++t)
      (mask >> t & 1u) ? (sum_a += sig.orders()[t], a.push_back(t))
                       : b.push_back(t);
    if (sum_a != -2) continue;  // contracted side must sum to -4
    for (int i : a) {
      if (sig.orders()[i] < 1) continue;
      for (int j : b) {
        if (sig.orders()[j] < 1) continue;
        DumbbellConfig c{sig, i, j, a, b};
        sum += c_dumbbell(c);
        ++rep.dumbbells;
      }
    }
  }
  rep.rhs = PiValue(Rational(1, k - 3)) * sum;
  rep.holds = rep.lhs == rep.rhs;
  if (rep.pockets == 0 && rep.dumbbells == 0)
    rep.diagnostic = "no cylinder configurations exist on " + sig.str();
  return rep;
}

// Cross-checks the closed form against the volume-ratio form for every
// configuration of every type on sig (no marked points). Returns the number
// of configurations checked; throws VerificationError on any mismatch.
inline long verify_closed_vs_ratio(const StratumSignature& sig) {
  long checked = 0;
  auto expect = [&](const PiValue& closed, const PiValue& ratio,
                    const char* kind) {
    if (closed != ratio)
      throw VerificationError(std::string(kind) + " closed/ratio mismatch on " +
                              sig.str() + ": " + closed.str() + " vs " +
                              ratio.str());
    ++checked;
  };
  int k = sig.size();
  for (int i = 0; i < k; ++i) {
    // type III
    if (sig.orders()[i] >= 1 && sig.poles() >= 2)
      expect(c_pocket(sig, i), c_pocket_ratio(sig, i), "pocket");
    // type I
    for (int j = i + 1; j < k; ++j)
      if (auto r = c_type1_ratio(sig, i, j))
        expect(c_type1(sig, i, j), *r, "type I");
  }
  // type II: each zero of order >= 2, each split, each ordered side partition
  for (int i = 0; i < k; ++i) {
    int di = sig.orders()[i];
    if (di < 2) continue;
    std::vector<int> rest;
    for (int t = 0; t < k; ++t)
      if (t != i) rest.push_back(t);
    int m = k - 1;
    for (int dp = -1; dp <= di - 3; ++dp) {
      int dpp = di - 4 - dp;
      if (dpp < -1) continue;
      for (unsigned mask = 0; mask < (1u << m); ++mask) {
        long sa = dp;
        TypeIIConfig c{sig, i, dp, dpp, {}, {}};
        for (int t = 0; t < m; ++t)
          (mask >> t & 1u) ? (sa += sig.orders()[rest[t]],
                              c.side_a.push_back(rest[t]))
                           : c.side_b.push_back(rest[t]);
        if (sa != -4) continue;
        expect(c_type2(c), c_type2_ratio(c), "type II");
      }
    }
  }
  // type IV: as enumerated for the identity
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    if (!(mask & 1u)) continue;
    std::vector<int> a, b;
    long sum_a = 0;
    for (int t = 0; t < k; ++t)
      (mask >> t & 1u) ? (sum_a += sig.orders()[t], a.push_back(t))
                       : b.push_back(t);
    if (sum_a != -2) continue;
    for (int i : a)
      for (int j : b)
        if (sig.orders()[i] >= 1 && sig.orders()[j] >= 1) {
          DumbbellConfig c{sig, i, j, a, b};
          expect(c_dumbbell(c), c_dumbbell_ratio(c), "dumbbell");
        }
  }
  return checked;
}

// --- Billiard-counting constants --------------------------------------------

// Family of right-angled tables with corner angles k_i * pi/2; doubling gives
// the stratum Q(k_1-2, ..., k_n-2).
inline StratumSignature family_stratum(const std::vector<int>& family) {
  std::vector<int> orders;
  long defect = 0;
  for (int ki : family) {
    if (ki < 1) throw InputError("corner angles must be positive");
    defect += 2 - ki;
    orders.push_back(ki - 2);
  }
  if (defect != 4)
    throw InputError("family violates Gauss-Bonnet: sum(2 - k_i) must be 4");
  return StratumSignature(orders);
}

// Theorem-style table constant for a corner pair: c_I / 4, the coefficient
// of L^2/Area in the convention where the asymptotic carries no pi.
inline PiValue billiard_pair_table_constant(int ki, int kj) {
  // a two-entry stand-in stratum carrying the two corner orders; the closed
  // form depends only on (d_i, d_j)
  std::vector<int> orders{ki - 2, kj - 2};
  int need = 0;
  long s = (ki - 2) + (kj - 2);
  while (s > -4) {
    orders.push_back(-1);
    --s;
    ++need;
  }
  if (s != -4) throw InputError("invalid corner pair");
  StratumSignature sig(orders);
  // indices of the two requested orders in the sorted signature
  int i = -1, j = -1;
  for (int t = 0; t < sig.size(); ++t) {
    if (sig.orders()[t] == ki - 2 && i < 0)
      i = t;
    else if (sig.orders()[t] == kj - 2 && j < 0)
      j = t;
  }
  return c_type1(sig, i, j) / PiValue(4);
}

enum class BilliardCount { DiagonalPair, NArea };

// Coefficient of L^2/Area in the quadratic asymptotics.
//   DiagonalPair: N_ij(L) ~ (c_I/4) * pi * L^2/Area for corners i, j.
//   NArea:        N_area(L) ~ (c_area/2) * L^2/Area = (1/16pi)Sum(4/k - k).
inline PiValue billiard_constant(const std::vector<int>& family,
                                 BilliardCount what, int i = -1, int j = -1) {
  StratumSignature sig = family_stratum(family);
  if (what == BilliardCount::NArea) {
    // c_area/2 as a pi-free closed form: (1/16)Sum(4/k_j - k_j) * pi^-2 * pi
    // is irrational in pi; keep it as (c_area/2) * pi (see README note on
    // normalization): coefficient of L^2/Area equals (1/16pi)Sum(4/k_j-k_j).
    Rational s = 0;
    for (int kj : family) s += Rational(4, kj) - kj;
    return PiValue::pi_power(-1, s / 16);
  }
  if (i < 0 || j < 0) throw InputError("corner pair required");
  if (i >= static_cast<int>(family.size()) || j >= static_cast<int>(family.size()))
    throw InputError("corner index out of range");
  return billiard_pair_table_constant(family[i], family[j]) *
         PiValue::pi_power(1);
}

}  // namespace flatcount
