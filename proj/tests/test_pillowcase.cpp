#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "flatcount/pillowcase.hpp"

using namespace flatcount;

namespace {

std::vector<Perm> all_perms(int n) {
  Perm p = identity_perm(n);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Brute-force labeled / orbit counts of tuples (g1,...,gr), product = id,
// by filtering full symmetric-group tuples. Independent of the engine's
// class enumeration, anchoring, and centralizer bookkeeping.
struct BruteCounts {
  BigInt labeled = 0;
  BigInt orbits = 0;
};

BruteCounts brute_tuples(int n, const std::vector<CycleType>& classes,
                         bool connected_only) {
  const auto perms = all_perms(n);
  std::vector<std::vector<int>> pool(classes.size());
  for (size_t c = 0; c < classes.size(); ++c)
    for (size_t i = 0; i < perms.size(); ++i)
      if (cycle_type(perms[i]) == classes[c]) pool[c].push_back(i);

  std::set<std::vector<int>> tuples;  // tuples of perm indices
  std::vector<int> cur(classes.size());
  auto rec = [&](auto&& self, size_t depth, const Perm& pref) -> void {
    if (depth + 1 == classes.size()) {
      Perm last = inverse(pref);
      if (cycle_type(last) != classes.back()) return;
      int idx = -1;
      for (int i : pool.back())
        if (perms[i] == last) idx = i;
      cur.back() = idx;
      std::vector<Perm> gens;
      for (size_t c = 0; c < classes.size(); ++c) gens.push_back(perms[cur[c]]);
      if (connected_only && !is_transitive(gens, n)) return;
      tuples.insert(cur);
      return;
    }
    for (int i : pool[depth]) {
      cur[depth] = i;
      self(self, depth + 1, compose(pref, perms[i]));
    }
  };
  rec(rec, 0, identity_perm(n));

  BruteCounts out;
  out.labeled = BigInt(tuples.size());
  // orbit count by expanding conjugation orbits
  std::set<std::vector<int>> left = tuples;
  std::map<Perm, int> index_of;
  for (size_t i = 0; i < perms.size(); ++i) index_of[perms[i]] = i;
  while (!left.empty()) {
    ++out.orbits;
    std::vector<int> t = *left.begin();
    for (const Perm& g : perms) {
      Perm gi = inverse(g);
      std::vector<int> u(t.size());
      for (size_t c = 0; c < t.size(); ++c)
        u[c] = index_of[compose(g, compose(perms[t[c]], gi))];
      left.erase(u);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("permutation utilities") {
  CHECK(cycle_type(canonical_of_type(6, {3, 2, 1})) ==
        CycleType({3, 2, 1}));
  CHECK(class_size(6, {3, 2, 1}) == 120);
  CHECK(centralizer_order({2, 2, 1, 1}) == 16);
  for (auto type : std::vector<CycleType>{{2, 2, 1}, {3, 2}, {5},
                                          {2, 1, 1, 1}, {1, 1, 1, 1, 1}}) {
    long count = 0;
    std::set<Perm> distinct;
    for_each_in_class(5, type, [&](const Perm& p) {
      ++count;
      CHECK(cycle_type(p) == type);
      distinct.insert(p);
    });
    CHECK(BigInt(count) == class_size(5, type));
    CHECK(BigInt(distinct.size()) == class_size(5, type));
  }
  CHECK(is_transitive({canonical_of_type(4, {4})}, 4));
  CHECK(!is_transitive({canonical_of_type(4, {2, 2})}, 4));
}

TEST_CASE("centralizer order of a tuple") {
  // <(0 1 2 3)> acting on itself: centralizer is the cyclic group, order 4
  CHECK(tuple_aut_order({canonical_of_type(4, {4})}, 4) == 4);
  // Klein four-group in S_4 is self-centralizing
  Perm a = {1, 0, 3, 2}, b = {2, 3, 0, 1};
  CHECK(tuple_aut_order({a, b}, 4) == 4);
  // trivial group on n points: centralizer is all of S_n
  CHECK(tuple_aut_order({identity_perm(4)}, 4) == 24);
  // two identical transitive components double up: |Aut| = a^2 * 2!
  Perm two_cycles = {1, 2, 3, 0, 5, 6, 7, 4};  // (0123)(4567)
  CHECK(tuple_aut_order({two_cycles}, 8) == 4 * 4 * 2);
}

TEST_CASE("symmetric group characters via Murnaghan-Nakayama") {
  // S_4 character table spot checks
  CHECK(sym_character({2, 2}, {2, 2}) == 2);
  CHECK(sym_character({3, 1}, {2, 2}) == -1);
  CHECK(sym_character({3, 1}, {4}) == -1);
  CHECK(sym_character({2, 2}, {4}) == 0);
  CHECK(sym_character({2, 1, 1}, {4}) == 1);
  CHECK(sym_character({1, 1, 1, 1}, {4}) == -1);
  CHECK(sym_dimension({3, 1}) == 3);
  CHECK(sym_dimension({2, 2}) == 2);
  CHECK(sym_dimension({2, 1, 1}) == 3);

  // column orthogonality: Sum_lambda chi(mu) chi(mu') = delta * z_mu
  for (int n = 2; n <= 8; ++n) {
    auto classes = partitions_of(n);
    for (auto& mu : classes)
      for (auto& nu : classes) {
        BigInt s = 0;
        for (auto& lambda : classes)
          s += sym_character(lambda, mu) * sym_character(lambda, nu);
        CHECK(s == (mu == nu ? centralizer_order(mu) : BigInt(0)));
      }
  }
  // dimension matches the character on the identity class
  for (auto& lambda : partitions_of(7))
    CHECK(sym_dimension(lambda) ==
          sym_character(lambda, CycleType(7, 1)));
}

TEST_CASE("tuple-count engine against a symmetric-group brute force") {
  struct Case {
    int n;
    std::vector<CycleType> classes;
  };
  std::vector<Case> cases = {
      {4, {{2, 2}, {2, 2}, {2, 2}, {1, 1, 1, 1}}},
      {4, {{2, 2}, {2, 2}, {2, 2}, {2, 2}}},
      {4, {{3, 1}, {3, 1}, {3, 1}}},
      {5, {{2, 2, 1}, {2, 2, 1}, {2, 2, 1}, {3, 1, 1}}},
      {5, {{5}, {2, 2, 1}, {2, 2, 1}}},
      {5, {{2, 1, 1, 1}, {2, 1, 1, 1}, {3, 1, 1}}},
  };
  for (auto& c : cases) {
    for (bool conn : {false, true}) {
      auto got = count_monodromy_tuples(c.n, c.classes, conn, true);
      auto want = brute_tuples(c.n, c.classes, conn);
      CHECK(got.labeled == want.labeled);
      CHECK(got.orbits == want.orbits);
      CHECK(got.weighted ==
            Rational(want.labeled) / Rational(factorial(c.n)));
    }
  }
}

TEST_CASE("cover spec validation and stratum mapping") {
  CHECK(validate_spec({}, {1, 1, 1, 1}, 1).stratum ==
        parse_signature("Q(-1^4)"));
  CHECK(validate_spec({}, {3, 1, 1, 1, 1, 1}, 2).stratum ==
        parse_signature("Q(1,-1^5)"));
  CHECK(validate_spec({2}, {1, 1, 1, 1, 1, 1}, 2).stratum ==
        parse_signature("Q(2,-1^6)"));
  CHECK_THROWS_AS(validate_spec({2}, {1, 1}, 3), InputError);  // genus != 0
  CHECK_THROWS_AS(validate_spec({}, {3, 1, 1, 1, 1, 1}, 1),
                  InputError);  // |nu|/2 > 2d
  CHECK_THROWS_AS(validate_spec({1}, {1, 1, 1, 1, 1, 1}, 2),
                  InputError);  // eta part 1
  CHECK_THROWS_AS(validate_spec({}, {2, 1, 1}, 1), InputError);  // even part
}

TEST_CASE("backtracking equals the character formula (weighted, all covers)") {
  std::vector<CoverSpec> specs = {
      validate_spec({}, {1, 1, 1, 1}, 1),
      validate_spec({}, {1, 1, 1, 1}, 2),
      validate_spec({}, {3, 1, 1, 1, 1, 1}, 2),
      validate_spec({2}, {1, 1, 1, 1, 1, 1}, 2),
  };
  for (auto& spec : specs) {
    Rational bt = count_covers_backtracking(spec, false, true);
    Rational ch = count_covers_character(spec);
    CHECK(bt == ch);
    Rational conn = count_covers_backtracking(spec, true, true);
    CHECK(conn <= bt);
  }
  // Q(1,-1^5) covers vanish at this degree (both counters agree on 0)
  CHECK(count_covers_character(validate_spec({}, {3, 1, 1, 1, 1, 1}, 2)) == 0);
  CHECK(count_covers_character(validate_spec({}, {1, 1, 1, 1}, 2)) ==
        Rational(31, 32));
  // hand-checked degree-4 case: 6 labeled tuples, one orbit, |Aut| = 4
  CoverSpec pillow = validate_spec({}, {1, 1, 1, 1}, 1);
  CHECK(count_covers_backtracking(pillow, false, true) == Rational(1, 4));
  CHECK(count_covers_backtracking(pillow, false, false) == 1);
  CHECK(count_covers_backtracking(pillow, true, false) == 1);
  CHECK_THROWS_AS(count_covers_backtracking(pillow, false, true, 2),
                  ResourceError);
}

TEST_CASE("square-tiled counts: pillowcase stratum, independent enumeration") {
  SqCounts sq = sq_count(parse_signature("Q(-1^4)"), 6);
  CHECK(sq.per_degree[0] == 1);  // the pillowcase itself
  for (size_t i = 1; i < sq.cumulative.size(); ++i)
    CHECK(sq.cumulative[i] >= sq.cumulative[i - 1]);

  // independent oracle: all four corner permutations have cycle parts in
  // {1,2} (involutions) with exactly four fixed points in total; count
  // conjugacy orbits of transitive tuples by direct orbit expansion
  for (int d = 1; d <= 6; ++d) {
    auto perms = all_perms(d);
    std::vector<int> invs;
    for (size_t i = 0; i < perms.size(); ++i)
      if (compose(perms[i], perms[i]) == identity_perm(d))
        invs.push_back(static_cast<int>(i));
    std::map<Perm, int> index_of;
    for (size_t i = 0; i < perms.size(); ++i)
      index_of[perms[i]] = static_cast<int>(i);
    auto fixed = [&](const Perm& p) {
      int f = 0;
      for (size_t i = 0; i < p.size(); ++i)
        if (p[i] == static_cast<int>(i)) ++f;
      return f;
    };
    std::set<std::vector<int>> tuples;
    for (int i1 : invs)
      for (int i2 : invs)
        for (int i3 : invs) {
          Perm p0 = inverse(compose(perms[i1], compose(perms[i2], perms[i3])));
          if (!(compose(p0, p0) == identity_perm(d))) continue;
          if (fixed(p0) + fixed(perms[i1]) + fixed(perms[i2]) +
                  fixed(perms[i3]) != 4)
            continue;
          if (!is_transitive({p0, perms[i1], perms[i2], perms[i3]}, d))
            continue;
          tuples.insert({index_of[p0], i1, i2, i3});
        }
    BigInt orbits = 0;
    std::set<std::vector<int>> left = tuples;
    while (!left.empty()) {
      ++orbits;
      std::vector<int> t = *left.begin();
      for (const Perm& g : perms) {
        Perm gi = inverse(g);
        std::vector<int> u(4);
        for (int c = 0; c < 4; ++c)
          u[c] = index_of[compose(g, compose(perms[t[c]], gi))];
        left.erase(u);
      }
    }
    CHECK(sq.per_degree[d - 1] == orbits);
  }
}

TEST_CASE("square-tiled counts: error handling") {
  CHECK_THROWS_AS(sq_count(parse_signature("Q(0,-1^4)"), 3), InputError);
  CHECK_THROWS_AS(sq_count(parse_signature("Q(-1^4)"), 50), ResourceError);
}

TEST_CASE("volume trend reports") {
  TrendReport rep = volume_trend(parse_signature("Q(-1^4)"), 6);
  CHECK(rep.dim == 2);
  CHECK(rep.target == PiValue::pi_power(2, 2));
  CHECK(rep.rows.size() == 6);
  for (auto& row : rep.rows) CHECK(row.normalized > 0);
  // deterministic across runs
  TrendReport rep2 = volume_trend(parse_signature("Q(-1^4)"), 6);
  for (size_t i = 0; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].normalized == rep2.rows[i].normalized);

  TrendReport cov = volume_trend(validate_spec({}, {1, 1, 1, 1}, 1), 3);
  CHECK(cov.target == PiValue::pi_power(2, Rational(1, 2)));  // 2pi^2/(2*2)
  CHECK(cov.rows.size() == 3);
  for (auto& row : cov.rows) {
    CHECK(row.normalized > 0);
    CHECK(row.normalized_weighted > 0);
    CHECK(row.normalized_weighted <= row.normalized);
  }
}
