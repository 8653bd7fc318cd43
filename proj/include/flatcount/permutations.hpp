#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "flatcount/combinatorics.hpp"

namespace flatcount {

// Permutation of {0..n-1} stored as the image vector; (a*b)(i) = a[b[i]].
using Perm = std::vector<int>;

inline Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline Perm inverse(const Perm& a) {
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int>(i);
  return r;
}

// Cycle type as a weakly decreasing list of cycle lengths (sums to n).
using CycleType = std::vector<int>;

inline CycleType cycle_type(const Perm& p) {
  const int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  CycleType t;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

// z_mu = prod(mu_i) * prod(mult_j!); |class| = n!/z_mu.
inline BigInt centralizer_order(const CycleType& mu) {
  BigInt z = 1;
  int run = 0;
  for (size_t i = 0; i < mu.size(); ++i) {
    z *= mu[i];
    run = (i > 0 && mu[i] == mu[i - 1]) ? run + 1 : 1;
    z *= run;
  }
  return z;
}

inline BigInt class_size(int n, const CycleType& mu) {
  return factorial(n) / centralizer_order(mu);
}

// Canonical representative of the conjugacy class: consecutive cycles
// (0 1 .. mu_1-1)(mu_1 ..)...
inline Perm canonical_of_type(int n, const CycleType& mu) {
  Perm p(n);
  int start = 0;
  for (int len : mu) {
    for (int i = 0; i < len; ++i) p[start + i] = start + (i + 1) % len;
    start += len;
  }
  if (start != n) throw InputError("cycle type does not sum to n");
  return p;
}

// Enumerate every permutation of the given cycle type exactly once.
// Cycles are anchored at the smallest unassigned point; equal lengths are
// deduplicated by requiring increasing anchors, which the smallest-point
// rule provides automatically.
inline void for_each_in_class(int n, const CycleType& mu,
                              const std::function<void(const Perm&)>& fn) {
  std::vector<int> remaining = mu;  // weakly decreasing
  Perm p(n, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self) -> void {
    int anchor = -1;
    for (int i = 0; i < n; ++i)
      if (!used[i]) {
        anchor = i;
        break;
      }
    if (anchor < 0) {
      fn(p);
      return;
    }
    int prev_len = -1;
    for (size_t li = 0; li < remaining.size(); ++li) {
      int len = remaining[li];
      if (len == prev_len) continue;  // same length: identical branch
      prev_len = len;
      remaining.erase(remaining.begin() + li);
      // build a cycle (anchor, x_1, ..., x_{len-1}) from unused points;
      // local to this level: deeper levels build their own cycles
      std::vector<int> cyc{anchor};
      used[anchor] = true;
      auto build = [&](auto&& bself, int depth) -> void {
        if (depth == len) {
          for (int i = 0; i < len; ++i) p[cyc[i]] = cyc[(i + 1) % len];
          self(self);
          for (int i = 0; i < len; ++i) p[cyc[i]] = -1;
          return;
        }
        for (int x = anchor + 1; x < n; ++x) {
          if (used[x]) continue;
          used[x] = true;
          cyc.push_back(x);
          bself(bself, depth + 1);
          cyc.pop_back();
          used[x] = false;
        }
      };
      build(build, 1);
      used[anchor] = false;
      remaining.insert(remaining.begin() + li, len);
    }
  };
  rec(rec);
}

// Is the group generated by the given permutations transitive on {0..n-1}?
inline bool is_transitive(const std::vector<Perm>& gens, int n) {
  if (n <= 1) return true;
  std::vector<int> stack{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const Perm& g : gens) {
      int y = g[x];
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

namespace detail {
// Does mapping base -> target extend to an equivariant map of the
// <gens>-orbit of base into that of target (commuting with every
// generator)? Callers must compare orbit sizes to get a bijection.
inline bool equivariant_match(const std::vector<Perm>& gens, int n, int base,
                              int target) {
  std::vector<int> m(n, -1);
  m[base] = target;
  std::vector<int> stack{base};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const Perm& g : gens) {
      int gx = g[x], want = g[m[x]];
      if (m[gx] == -1) {
        m[gx] = want;
        stack.push_back(gx);
      } else if (m[gx] != want) {
        return false;
      }
    }
  }
  return true;
}
}  // namespace detail

// Order of the centralizer in S_n of the group generated by gens
// (= automorphism group of the corresponding labeled cover).
inline BigInt tuple_aut_order(const std::vector<Perm>& gens, int n) {
  // orbit decomposition
  std::vector<int> comp(n, -1);
  std::vector<int> reps;
  std::vector<int> size;
  for (int i = 0; i < n; ++i) {
    if (comp[i] != -1) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(i);
    size.push_back(1);
    std::vector<int> stack{i};
    comp[i] = c;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Perm& g : gens)
        if (comp[g[x]] == -1) {
          comp[g[x]] = c;
          ++size[c];
          stack.push_back(g[x]);
        }
    }
  }
  // group components into equivariant-isomorphism classes; count
  // self-isomorphisms of one representative per class. An equivariant map
  // between components of equal size is automatically a bijection; the
  // size check rules out equivariant surjections onto smaller components.
  const int nc = static_cast<int>(reps.size());
  std::vector<int> klass(nc, -1);
  BigInt total = 1;
  for (int c = 0; c < nc; ++c) {
    if (klass[c] != -1) continue;
    klass[c] = c;
    long members = 1;
    for (int c2 = c + 1; c2 < nc; ++c2)
      if (klass[c2] == -1 && size[c2] == size[c] &&
          detail::equivariant_match(gens, n, reps[c], reps[c2])) {
        klass[c2] = c;
        ++members;
      }
    // self-isomorphism count of one component: valid targets within it
    long self_iso = 0;
    for (int y = 0; y < n; ++y)
      if (comp[y] == c && detail::equivariant_match(gens, n, reps[c], y))
        ++self_iso;
    BigInt a = self_iso;
    for (long j = 1; j <= members; ++j) total *= a * j;  // a^members * members!
  }
  return total;
}

}  // namespace flatcount
