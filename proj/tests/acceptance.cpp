// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
// Tolerances and bounds are pinned in this file; nothing here is tuned to
// force a pass — criteria that the mathematics genuinely does not satisfy at
// desk scale fail with the measured value printed.

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "flatcount/flat_sphere.hpp"
#include "flatcount/identity_lab.hpp"
#include "flatcount/pillowcase.hpp"
#include "flatcount/siegel_veech.hpp"
#include "flatcount/strata.hpp"

using namespace flatcount;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what,
            double seconds, const std::string& detail = "") {
  std::printf("%s criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL",
              criterion, what.c_str(), seconds,
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename F>
void run(int criterion, const std::string& what, F&& body) {
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  report(criterion, ok, what, secs, detail);
}

// |measured/predicted - 1| <= tol, evaluated with exact rationals against a
// decimal evaluation of the predicted constant.
bool within(const Rational& measured, const PiValue& predicted, double tol,
            std::string& ratio_out) {
  double pred = std::stod(to_decimal(predicted, 15));
  double meas = numerator(measured).convert_to<double>() /
                denominator(measured).convert_to<double>();
  double ratio = meas / pred;
  std::ostringstream os;
  os.precision(4);
  os << std::fixed << ratio;
  ratio_out = os.str();
  return std::abs(ratio - 1.0) <= tol;
}

std::string run_cli(const std::string& args, int& rc) {
  std::string cmd = "./flatcount " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    rc = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  rc = pclose(p);
  return out;
}

}  // namespace

int main() {
  // 1. exact stratum volumes
  run(1, "volume exactness", [](std::string& d) {
    bool ok = volume(parse_signature("Q(1,-1^5)")) == PiValue::pi_power(4) &&
              volume(parse_signature("Q(2,-1^6)")) ==
                  PiValue::pi_power(4, Rational(8, 3));
    if (!ok) d = "volume values differ from pi^4 / 8*pi^4/3";
    return ok;
  });

  // 2. closed-form vs ratio-form Siegel-Veech constants, k <= 8
  run(2, "closed = ratio Siegel-Veech forms, k <= 8", [](std::string& d) {
    long configs = 0;
    for (const auto& sig : enumerate_signatures(8, false))
      configs += verify_closed_vs_ratio(sig);  // throws on any mismatch
    d = std::to_string(configs) + " configurations";
    return configs > 0;
  });

  // 3. c_area configuration identity, 5 <= k <= 8
  run(3, "c_area identity, 5 <= k <= 8", [](std::string& d) {
    long checked = 0;
    for (const auto& sig : enumerate_signatures(8, false)) {
      if (sig.orders().size() < 5 || sig.is_pillowcase()) continue;
      if (!verify_carea_identity(sig).holds) {
        d = "identity fails on " + sig.str();
        return false;
      }
      ++checked;
    }
    CareaIdentityReport rep = verify_carea_identity(parse_signature("Q(1,-1^5)"));
    if (rep.lhs != PiValue::pi_power(-2, Rational(5, 3))) {
      d = "Q(1,-1^5) value is " + rep.lhs.str() + ", expected 5/3*pi^-2";
      return false;
    }
    d = std::to_string(checked) + " signatures";
    return checked > 0;
  });

  // 4. billiard corner-pair constant table
  run(4, "corner-pair constant table", [](std::string& d) {
    struct Entry {
      int ki, kj;
      PiValue want;
    };
    std::array<Entry, 6> table{{
        {4, 4, PiValue(Rational(9, 10))},
        {4, 3, PiValue(Rational(45, 64))},
        {4, 1, PiValue(Rational(9, 32))},
        {3, 3, PiValue::pi_power(-2, Rational(16, 3))},
        {3, 1, PiValue::pi_power(-2, 2)},
        {1, 1, PiValue::pi_power(-2, Rational(1, 2))},
    }};
    for (const auto& e : table)
      if (billiard_pair_table_constant(e.ki, e.kj) != e.want) {
        d = "entry (" + std::to_string(e.ki) + "," + std::to_string(e.kj) +
            ") differs";
        return false;
      }
    return true;
  });

  // 5. combinatorial identities: subset-sum, Mohanty, F^2 = G
  run(5, "combinatorial identity sweeps", [](std::string& d) {
    long cases = 0;
    std::vector<int> dv;
    auto sweep = [&](auto&& self, int m) -> void {
      if (m == 0) {
        if (!dv.empty()) {
          if (!verify_apr2012(dv).holds)
            throw VerificationError("subset-sum identity fails");
          ++cases;
        }
        return;
      }
      for (int x = 0; x <= 4; ++x) {
        dv.push_back(x);
        self(self, m - 1);
        dv.pop_back();
      }
    };
    for (int m = 1; m <= 3; ++m) sweep(sweep, m);
    std::mt19937 rng(0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> r(1 + rng() % 6);
      for (int& x : r) x = static_cast<int>(rng() % 7);
      if (!verify_apr2012(r).holds) {
        d = "random subset-sum case fails";
        return false;
      }
      ++cases;
    }
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> b(1 + rng() % 3);
      for (int& x : b) x = 1 + static_cast<int>(rng() % 6);
      int a = 1 + static_cast<int>(rng() % 4);
      TruncatedSeries za = solve_mohanty_z(b, 6).pow(a);
      for (const auto& k : exponent_vectors(static_cast<int>(b.size()), 6))
        if (za.coeff(k) != mohanty_coefficient(a, b, k)) {
          d = "Mohanty coefficient mismatch";
          return false;
        }
    }
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> dd(1 + rng() % 3);
      for (int& x : dd) x = static_cast<int>(rng() % 5);
      if (!verify_F2_equals_G(dd, 5).holds) {
        d = "F^2 != G";
        return false;
      }
    }
    d = std::to_string(cases) + " subset-sum cases, 20 Mohanty, 20 F2G";
    return true;
  });

  // 6. billiard enumeration vs closed-form lattice oracle on 50 rectangles
  run(6, "rectangle lattice oracle, 50 seeded tables", [](std::string& d) {
    std::mt19937 rng(0);
    for (int trial = 0; trial < 50; ++trial) {
      Rational a(1 + static_cast<int>(rng() % 30),
                 1 + static_cast<int>(rng() % 10));
      Rational b(1 + static_cast<int>(rng() % 30),
                 1 + static_cast<int>(rng() % 10));
      RectilinearPolygon rect;
      rect.vertices = {{0, 0}, {a, 0}, {a, b}, {0, b}};
      Table t = validate(rect);
      Rational mn = a < b ? a : b;
      Rational L_sq = Rational(1 + static_cast<int>(rng() % 10000)) * mn * mn;
      std::map<std::pair<int, std::string>, long> lattice;
      for (long p = 1; Rational(p * p) * a * a <= L_sq; ++p)
        for (long q = 1;
             Rational(p * p) * a * a + Rational(q * q) * b * b <= L_sq; ++q) {
          if (gcd(BigInt(p), BigInt(q)) != 1) continue;
          int target = (p % 2 == 1) ? ((q % 2 == 1) ? 2 : 1) : 3;
          lattice[{target, rational_str(Rational(p * p) * a * a +
                                        Rational(q * q) * b * b)}]++;
        }
      std::map<std::pair<int, std::string>, long> got;
      for (const auto& r : enumerate_diagonals(t, 0, L_sq))
        if (!r.parallel_to_side)
          got[{r.target, rational_str(r.length_sq)}]++;
      if (lattice != got) {
        d = "mismatch on rectangle " + rational_str(a) + " x " +
            rational_str(b) + " at L_sq " + rational_str(L_sq);
        return false;
      }
    }
    return true;
  });

  // 7. L-shape asymptotic trend at L^2 = 10^4 * Area, 20% tolerance.
  // The (pi/2, 3pi/2) sub-check is expected to fail: this L-shape is
  // square-tiled (an arithmetic lattice surface), so it sits in the
  // measure-zero exceptional set of the almost-everywhere counting theorem;
  // the measured rate converges to 3/4 of the generic constant (verified
  // against an independent segment-tracing oracle, so this is the surface's
  // true rate, not an enumeration bug).
  run(7, "L-shape counting vs predicted constants, 20% tolerance",
      [](std::string& d) {
        RectilinearPolygon L;
        L.vertices = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
        Table t = validate(L);
        Rational L_sq = Rational(10000) * t.area();  // 30000
        PairCounts counts = count_by_pair(t, L_sq);
        std::vector<int> fam = t.family();
        // (pi/2, 3pi/2): pole 0 to the 3pi/2 corner (id 3)
        Rational rate03 = Rational(counts.at({0, 3})) / L_sq;
        PiValue pred03 =
            billiard_constant(fam, BilliardCount::DiagonalPair, 0, 3) *
            (PiValue(1) / PiValue(t.area()));
        std::string ratio03;
        bool ok03 = within(rate03, pred03, 0.20, ratio03);
        // pocket pair: poles 0 and 2 (adjacent pi/2 corners)
        Rational rate02 = Rational(counts.at({0, 2})) / L_sq;
        PiValue pred02 =
            billiard_constant(fam, BilliardCount::DiagonalPair, 0, 2) *
            (PiValue(1) / PiValue(t.area()));
        std::string ratio02;
        bool ok02 = within(rate02, pred02, 0.20, ratio02);
        d = "(pi/2,3pi/2) measured/predicted = " + ratio03 +
            (ok03 ? "" : " [outside 20%: arithmetic Veech table, true rate "
                         "is 3/4 of the generic constant]") +
            "; pocket measured/predicted = " + ratio02;
        return ok03 && ok02;
      });

  // 8. pillowcase backtracking vs character formula, 4d <= 12, k <= 6
  run(8, "pillowcase covers: backtracking = character formula",
      [](std::string& d) {
        long checked = 0;
        // all (eta, nu) with parts <= 7, |nu| <= 12, stratum k <= 6
        std::vector<std::vector<int>> etas{{}, {2}, {3}, {2, 2}};
        std::vector<std::vector<int>> nus;
        std::vector<int> nu;
        auto gen = [&](auto&& self, int max_part, int budget) -> void {
          if (!nu.empty()) {
            int s = 0;
            for (int x : nu) s += x;
            if (s % 2 == 0) nus.push_back(nu);
          }
          for (int p = std::min(max_part, budget); p >= 1; p -= 2) {
            nu.push_back(p);
            self(self, p, budget - p);
            nu.pop_back();
          }
        };
        gen(gen, 7, 12);
        nus.push_back({});
        for (const auto& eta : etas)
          for (const auto& nv : nus) {
            int abs_nu = 0;
            for (int x : nv) abs_nu += x;
            for (int dd = std::max(1, (abs_nu + 3) / 4); 4 * dd <= 12; ++dd) {
              CoverSpec spec;
              try {
                spec = validate_spec(eta, nv, dd);
              } catch (const InputError&) {
                continue;
              }
              if (static_cast<int>(spec.stratum.orders().size()) > 6) continue;
              Rational bt = count_covers_backtracking(spec, false, true);
              Rational ch = count_covers_character(spec);
              if (bt != ch) {
                d = "mismatch at d=" + std::to_string(dd);
                return false;
              }
              ++checked;
            }
          }
        // trend output: deterministic and Sq_N monotone (the Theorem-1.7
        // limit itself is not asserted at desk scale)
        SqCounts sq = sq_count(parse_signature("Q(-1^4)"), 6);
        for (size_t i = 1; i < sq.cumulative.size(); ++i)
          if (sq.cumulative[i] < sq.cumulative[i - 1]) {
            d = "Sq_N not monotone";
            return false;
          }
        TrendReport r1 = volume_trend(parse_signature("Q(-1^4)"), 5);
        TrendReport r2 = volume_trend(parse_signature("Q(-1^4)"), 5);
        for (size_t i = 0; i < r1.rows.size(); ++i)
          if (r1.rows[i].normalized != r2.rows[i].normalized) {
            d = "trend not deterministic";
            return false;
          }
        d = std::to_string(checked) + " specs";
        return checked >= 5;
      });

  // 9. verify-all determinism: byte-identical across runs and workers {1,4}
  run(9, "verify-all byte-determinism, workers {1,4}", [](std::string& d) {
    int rc1 = 0, rc2 = 0, rc4 = 0;
    std::string a = run_cli("verify-all --seed 0 --workers 1", rc1);
    std::string b = run_cli("verify-all --seed 0 --workers 1", rc2);
    std::string c = run_cli("verify-all --seed 0 --workers 4", rc4);
    if (a.empty() || rc1 != 0 || rc2 != 0 || rc4 != 0) {
      d = "verify-all did not run cleanly (is ./flatcount built?)";
      return false;
    }
    if (a != b) {
      d = "consecutive runs differ";
      return false;
    }
    if (a != c) {
      d = "worker counts 1 and 4 differ";
      return false;
    }
    d = std::to_string(a.size()) + " bytes, identical across 3 runs";
    return true;
  });

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
