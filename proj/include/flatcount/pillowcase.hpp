#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flatcount/permutations.hpp"
#include "flatcount/strata.hpp"

namespace flatcount {

// ---------------------------------------------------------------------------
// Symmetric-group characters via the Murnaghan-Nakayama rule (beta-number
// border-strip removal), with memoization. Degrees here are small (n <= 12).
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<int> beta_set(const std::vector<int>& lambda) {
  const int m = static_cast<int>(lambda.size());
  std::vector<int> beta(m);
  for (int i = 0; i < m; ++i) beta[i] = lambda[i] + (m - 1 - i);
  return beta;  // strictly decreasing
}

inline std::vector<int> partition_of_beta(std::vector<int> beta) {
  std::sort(beta.rbegin(), beta.rend());
  const int m = static_cast<int>(beta.size());
  std::vector<int> lambda;
  for (int i = 0; i < m; ++i) {
    int part = beta[i] - (m - 1 - i);
    if (part > 0) lambda.push_back(part);
  }
  return lambda;
}

}  // namespace detail

// chi_lambda evaluated on the class of cycle type mu (|lambda| = |mu|).
inline BigInt sym_character(const std::vector<int>& lambda,
                            const std::vector<int>& mu) {
  static std::map<std::pair<std::vector<int>, std::vector<int>>, BigInt> memo;
  if (mu.empty()) return 1;  // empty partition, trivial character
  auto key = std::make_pair(lambda, mu);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const int t = mu[0];
  const std::vector<int> rest(mu.begin() + 1, mu.end());
  std::vector<int> beta = detail::beta_set(lambda);
  BigInt total = 0;
  for (size_t i = 0; i < beta.size(); ++i) {
    int b = beta[i];
    if (b < t) continue;
    int target = b - t;
    bool occupied = false;
    int height = 0;  // beta entries strictly between target and b
    for (size_t j = 0; j < beta.size(); ++j) {
      if (beta[j] == target) occupied = true;
      if (beta[j] > target && beta[j] < b) ++height;
    }
    if (occupied) continue;
    std::vector<int> nb = beta;
    nb[i] = target;
    BigInt term = sym_character(detail::partition_of_beta(nb), rest);
    total += (height % 2 == 0) ? term : -term;
  }
  memo[key] = total;
  return total;
}

// Dimension of the irreducible representation (hook length formula).
inline BigInt sym_dimension(const std::vector<int>& lambda) {
  int n = 0;
  for (int p : lambda) n += p;
  BigInt hooks = 1;
  const int rows = static_cast<int>(lambda.size());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lambda[i]; ++j) {
      int arm = lambda[i] - j - 1;
      int leg = 0;
      for (int r = i + 1; r < rows; ++r)
        if (lambda[r] > j) ++leg;
      hooks *= arm + leg + 1;
    }
  return factorial(n) / hooks;
}

// ---------------------------------------------------------------------------
// Core tuple counter: labeled/weighted/orbit counts of monodromy tuples
// (g_1, ..., g_r), g_i in the conjugacy class of cycle type classes[i],
// with g_1 g_2 ... g_r = id (as function composition, in this order).
// ---------------------------------------------------------------------------

struct TupleCounts {
  BigInt labeled = 0;  // tuples on labeled points {1..n}
  Rational weighted;   // labeled / n!  (= sum over orbits of 1/|Aut|)
  BigInt orbits = 0;   // simultaneous-conjugacy orbits (set iff requested)
};

inline TupleCounts count_monodromy_tuples(int n,
                                          std::vector<CycleType> classes,
                                          bool connected_only,
                                          bool want_orbits) {
  const int r = static_cast<int>(classes.size());
  if (r < 1) throw InputError("count_monodromy_tuples: no classes");
  for (auto& c : classes) {
    int s = 0;
    for (int p : c) {
      if (p < 1) throw InputError("cycle type with nonpositive part");
      s += p;
    }
    if (s != n) throw InputError("cycle type does not sum to the degree");
  }
  TupleCounts out;
  out.weighted = 0;
  if (n == 0) return out;

  // Cyclically rotate so that the largest class is the determined last
  // factor and (hence) never enumerated; the first factor of the rotated
  // word is pinned to a canonical representative.
  int det = 0;
  BigInt best = class_size(n, classes[0]);
  for (int i = 1; i < r; ++i) {
    BigInt s = class_size(n, classes[i]);
    if (s > best) {
      best = s;
      det = i;
    }
  }
  std::vector<CycleType> rot;
  for (int i = 1; i <= r; ++i) rot.push_back(classes[(det + i) % r]);

  const Perm g1 = canonical_of_type(n, rot[0]);
  std::vector<std::vector<Perm>> lists;  // classes rot[1..r-2], enumerated
  for (int i = 1; i + 1 < r; ++i) {
    lists.emplace_back();
    for_each_in_class(n, rot[i],
                      [&](const Perm& p) { lists.back().push_back(p); });
  }

  // target cycle-length counts for the determined factor
  std::vector<int> want_count(n + 1, 0);
  for (int p : rot.back()) ++want_count[p];

  BigInt found = 0, aut_sum = 0;
  std::vector<Perm> prefix(lists.size() + 1, Perm(n));
  prefix[0] = g1;
  std::vector<const Perm*> chosen(lists.size(), nullptr);
  std::vector<int> cyc_count(n + 1);
  std::vector<char> seen(n);

  auto rec = [&](auto&& self, size_t depth) -> void {
    if (depth == lists.size()) {
      // last factor is the inverse of the prefix product; same cycle type
      const Perm& P = prefix[depth];
      std::fill(cyc_count.begin(), cyc_count.end(), 0);
      std::fill(seen.begin(), seen.end(), 0);
      for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j]; j = P[j]) {
          seen[j] = 1;
          ++len;
        }
        ++cyc_count[len];
      }
      if (cyc_count != want_count) return;
      if (connected_only || want_orbits) {
        // P generates the same cyclic group as the last factor P^{-1}
        std::vector<Perm> gens;
        gens.push_back(g1);
        for (const Perm* g : chosen) gens.push_back(*g);
        gens.push_back(P);
        if (connected_only && !is_transitive(gens, n)) return;
        ++found;
        if (want_orbits) aut_sum += tuple_aut_order(gens, n);
      } else {
        ++found;
      }
      return;
    }
    const Perm& a = prefix[depth];
    Perm& dst = prefix[depth + 1];
    for (const Perm& g : lists[depth]) {
      for (int i = 0; i < n; ++i) dst[i] = a[g[i]];
      chosen[depth] = &g;
      self(self, depth + 1);
    }
  };

  if (r == 1) {
    // single factor: it must be the identity (and of the requested type)
    CycleType ones(n, 1);
    if (rot[0] == ones) {
      found = 1;
      if (connected_only && n > 1) found = 0;
      if (found != 0 && want_orbits) aut_sum = factorial(n);
    }
  } else {
    rec(rec, 0);
  }

  out.labeled = found * class_size(n, rot[0]);
  out.weighted = Rational(out.labeled) / Rational(factorial(n));
  if (want_orbits) {
    BigInt z = centralizer_order(rot[0]);
    if (aut_sum % z != 0)
      throw VerificationError("orbit count is not an integer");
    out.orbits = aut_sum / z;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pillowcase covers of degree 4d with ramification data (eta, nu):
// profile (nu, 2^{2d-|nu|/2}) over one corner, (2^{2d}) over the other
// three, (eta_i, 1^{4d-eta_i}) over l(eta) interior points.
// ---------------------------------------------------------------------------

struct CoverSpec {
  int d = 1;                 // degree of the cover is 4d
  std::vector<int> eta;      // interior ramification, parts >= 2
  std::vector<int> nu;       // corner profile, odd parts, |nu| even
  StratumSignature stratum;  // Q({nu_i - 2} union {2 eta_j - 2})
};

inline CoverSpec validate_spec(std::vector<int> eta, std::vector<int> nu,
                               int d) {
  if (d < 1) throw InputError("cover degree parameter d must be >= 1");
  std::sort(eta.rbegin(), eta.rend());
  std::sort(nu.rbegin(), nu.rend());
  int abs_eta = 0, abs_nu = 0;
  for (int e : eta) {
    if (e < 2)
      throw InputError("eta parts must be >= 2 (parts equal to 1 are "
                       "unramified and rejected as redundant)");
    if (e > 4 * d) throw InputError("eta part exceeds the cover degree");
    abs_eta += e;
  }
  for (int v : nu) {
    if (v < 1 || v % 2 == 0)
      throw InputError("nu must be a partition into odd parts");
    abs_nu += v;
  }
  if (abs_nu % 2 != 0) throw InputError("|nu| must be even");
  if (abs_nu / 2 > 2 * d)
    throw InputError("|nu|/2 exceeds 2d: no valid corner profile");
  const int genus_term = static_cast<int>(eta.size()) +
                         static_cast<int>(nu.size()) - abs_eta - abs_nu / 2;
  if (genus_term != 2)
    throw InputError("genus-0 condition l(eta)+l(nu)-|eta|-|nu|/2=2 fails "
                     "(got " + std::to_string(genus_term) + ")");
  std::vector<int> orders;
  for (int v : nu) orders.push_back(v - 2);
  for (int e : eta) orders.push_back(2 * e - 2);
  CoverSpec spec;
  spec.d = d;
  spec.eta = std::move(eta);
  spec.nu = std::move(nu);
  spec.stratum = StratumSignature(orders);
  return spec;
}

namespace detail {
inline std::vector<CycleType> cover_classes(const CoverSpec& spec) {
  const int n = 4 * spec.d;
  int abs_nu = 0;
  for (int v : spec.nu) abs_nu += v;
  CycleType corner0 = spec.nu;
  corner0.insert(corner0.end(), 2 * spec.d - abs_nu / 2, 2);
  std::sort(corner0.rbegin(), corner0.rend());
  CycleType doubles(2 * spec.d, 2);
  std::vector<CycleType> classes{corner0, doubles, doubles, doubles};
  for (int e : spec.eta) {
    CycleType t{e};
    t.insert(t.end(), n - e, 1);
    classes.push_back(t);
  }
  return classes;
}

inline void check_degree_cap(int n, int cap) {
  if (n > cap)
    throw ResourceError("cover degree " + std::to_string(n) +
                        " exceeds the cap " + std::to_string(cap));
}
}  // namespace detail

inline Rational count_covers_backtracking(const CoverSpec& spec,
                                          bool connected_only, bool weighted,
                                          int cap = 12) {
  const int n = 4 * spec.d;
  detail::check_degree_cap(n, cap);
  auto counts = count_monodromy_tuples(n, detail::cover_classes(spec),
                                       connected_only, !weighted);
  return weighted ? counts.weighted : Rational(counts.orbits);
}

// Frobenius character formula: weighted count of all (not necessarily
// connected) covers, Sum over tuples with product id of 1/n!.
inline Rational count_covers_character(const CoverSpec& spec, int cap = 12) {
  const int n = 4 * spec.d;
  detail::check_degree_cap(n, cap);
  const std::vector<CycleType> classes = detail::cover_classes(spec);
  const int r = static_cast<int>(classes.size());
  Rational prod_sizes = 1;
  for (const auto& c : classes) prod_sizes *= Rational(class_size(n, c));
  Rational sum = 0;
  for (const auto& lambda : partitions_of(n)) {
    Rational term = 1;
    for (const auto& c : classes) term *= Rational(sym_character(lambda, c));
    Rational dim(sym_dimension(lambda));
    for (int i = 0; i < r - 2; ++i) term /= dim;
    sum += term;
  }
  // labeled tuple count / n! = weighted cover count
  Rational nf(factorial(n));
  return prod_sizes * sum / (nf * nf);
}

// ---------------------------------------------------------------------------
// Square-tiled pillowcase surfaces (Sq): connected covers of the pillowcase
// of degree d branched only over the four corners, with combined corner
// singularity data equal to the given genus-0 signature. A cycle of length
// c over a corner carries cone angle c*pi, i.e. order c-2; c=2 is regular.
// ---------------------------------------------------------------------------

struct SqCounts {
  std::vector<BigInt> per_degree;  // index d-1: covers of degree d
  std::vector<BigInt> cumulative;  // Sq_N for N = 1..N_max
};

inline SqCounts sq_count(const StratumSignature& sig, int N, int cap = 8) {
  if (sig.marked_points() > 0)
    throw InputError("square-tiled counting requires no marked points");
  if (N < 1) throw InputError("sq_count: N must be >= 1");
  if (N > cap)
    throw ResourceError("sq_count: N = " + std::to_string(N) +
                        " exceeds the cap " + std::to_string(cap));
  // distinct orders with multiplicities
  std::vector<std::pair<int, int>> mult;
  for (int o : sig.orders()) {
    if (!mult.empty() && mult.back().first == o)
      ++mult.back().second;
    else
      mult.emplace_back(o, 1);
  }
  SqCounts out;
  for (int d = 1; d <= N; ++d) {
    BigInt total = 0;
    // distribute each order's multiplicity over the four corners
    std::vector<std::vector<int>> corner_parts(4);
    auto assign = [&](auto&& self, size_t mi) -> void {
      if (mi == mult.size()) {
        std::vector<CycleType> classes(4);
        for (int c = 0; c < 4; ++c) {
          int used = 0;
          for (int p : corner_parts[c]) used += p;
          int rem = d - used;
          if (rem < 0 || rem % 2 != 0) return;
          classes[c] = corner_parts[c];
          classes[c].insert(classes[c].end(), rem / 2, 2);
          std::sort(classes[c].rbegin(), classes[c].rend());
        }
        total += count_monodromy_tuples(d, classes, true, true).orbits;
        return;
      }
      auto [order, m] = mult[mi];
      // compositions of m into 4 nonnegative parts
      for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b)
          for (int c = 0; a + b + c <= m; ++c) {
            int parts[4] = {a, b, c, m - a - b - c};
            for (int q = 0; q < 4; ++q)
              corner_parts[q].insert(corner_parts[q].end(), parts[q],
                                     order + 2);
            self(self, mi + 1);
            for (int q = 0; q < 4; ++q)
              corner_parts[q].resize(corner_parts[q].size() - parts[q]);
          }
    };
    assign(assign, 0);
    out.per_degree.push_back(total);
    out.cumulative.push_back(total +
                             (out.cumulative.empty() ? BigInt(0)
                                                     : out.cumulative.back()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Volume trends: normalized partial sums against the exact volume target.
// ---------------------------------------------------------------------------

struct TrendRow {
  int N = 0;
  Rational normalized;          // orbit-count based
  Rational normalized_weighted; // 1/|Aut|-weighted (cover trend only)
};

struct TrendReport {
  StratumSignature stratum;
  int dim = 0;
  PiValue target;  // exact value the normalized column should approach
  std::vector<TrendRow> rows;
};

// Square-tiled trend: rows (N, 2*dim*Sq_N / N^dim); target Vol Q_1(sig).
inline TrendReport volume_trend(const StratumSignature& sig, int N,
                                int cap = 8) {
  TrendReport rep;
  rep.stratum = sig;
  rep.dim = sig.dimension();
  rep.target = volume(sig);
  SqCounts sq = sq_count(sig, N, cap);
  for (int i = 1; i <= N; ++i) {
    TrendRow row;
    row.N = i;
    BigInt denom = 1;
    for (int e = 0; e < rep.dim; ++e) denom *= i;
    row.normalized =
        Rational(2 * rep.dim) * Rational(sq.cumulative[i - 1]) /
        Rational(denom);
    row.normalized_weighted = row.normalized;
    rep.rows.push_back(row);
  }
  return rep;
}

// Cover trend: rows (N, Sum_{d<=N} Cov0_4d / N^dim), both with orbit counts
// and with 1/|Aut| weights; target Vol Q_1(eta,nu) / (2 dim).
inline TrendReport volume_trend(const CoverSpec& spec, int N, int cap = 12) {
  TrendReport rep;
  rep.stratum = spec.stratum;
  rep.dim = rep.stratum.dimension();
  rep.target = volume(rep.stratum) / PiValue(2 * rep.dim);
  Rational cum_orbits = 0, cum_weighted = 0;
  for (int d = 1; d <= N; ++d) {
    CoverSpec s = spec;
    s.d = d;
    cum_orbits += count_covers_backtracking(s, true, false, cap);
    cum_weighted += count_covers_backtracking(s, true, true, cap);
    TrendRow row;
    row.N = d;
    BigInt denom = 1;
    for (int e = 0; e < rep.dim; ++e) denom *= d;
    row.normalized = cum_orbits / Rational(denom);
    row.normalized_weighted = cum_weighted / Rational(denom);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace flatcount
