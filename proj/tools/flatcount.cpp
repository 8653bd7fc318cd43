// flatcount: exact computations for genus-0 strata of quadratic differentials,
// Siegel-Veech constants, combinatorial identities, billiard diagonal counts,
// and pillowcase-cover enumeration. All output is deterministic: identical
// arguments (and seed/worker settings) produce byte-identical output.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "flatcount/flat_sphere.hpp"
#include "flatcount/identity_lab.hpp"
#include "flatcount/pillowcase.hpp"
#include "flatcount/siegel_veech.hpp"
#include "flatcount/strata.hpp"

using namespace flatcount;
using nlohmann::json;

namespace {

json pi_value_json(const PiValue& v) {
  json terms = json::object();
  for (const auto& [e, c] : v.terms())
    terms[std::to_string(e)] = rational_str(c);
  return json{{"terms", terms}};
}

std::pair<int, int> parse_pair(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw InputError("expected a pair \"i,j\": " + s);
  return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

Table load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polygon file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("polygon file is not valid JSON: " + std::string(e.what()));
  }
  RectilinearPolygon poly;
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw InputError("polygon file must contain a \"vertices\" array");
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2)
      throw InputError("each vertex must be a [x, y] pair of rational strings");
    poly.vertices.push_back({parse_rational(v[0].get<std::string>()),
                             parse_rational(v[1].get<std::string>())});
  }
  if (j.contains("slits"))
    for (const auto& s : j["slits"]) {
      if (!s.is_array() || s.size() != 2)
        throw InputError("each slit must be a [base, tip] pair of points");
      poly.slits.push_back({{parse_rational(s[0][0].get<std::string>()),
                             parse_rational(s[0][1].get<std::string>())},
                            {parse_rational(s[1][0].get<std::string>()),
                             parse_rational(s[1][1].get<std::string>())}});
    }
  return validate(poly);
}

// Counting constant for the (i,j) diagonal family divided by the table area:
// the expected limit of N_ij(L)/L^2 on a generic table of the same family.
PiValue predicted_rate(const Table& t, int i, int j) {
  PiValue c = billiard_constant(t.family(), BilliardCount::DiagonalPair, i, j);
  PiValue inv_area = PiValue(1) / PiValue(t.area());
  return c * inv_area;
}

// ---------------------------------------------------------------------------
// verify-all: one deterministic pass over every module's invariant suite.
// ---------------------------------------------------------------------------

struct Verifier {
  bool all_ok = true;
  void check(bool ok, const std::string& name, const std::string& detail = "") {
    std::cout << (ok ? "ok   " : "FAIL ") << name;
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << "\n";
    if (!ok) all_ok = false;
  }
};

int run_verify_all(unsigned seed, int workers) {
  Verifier v;

  // --- exact pi-arithmetic ---
  {
    PiValue a = PiValue::pi_power(2, Rational(3, 7)) + PiValue(Rational(1, 2));
    PiValue b = PiValue::pi_power(-1, 5);
    v.check((a + b) - b == a, "pi_arith: additive group");
    v.check(a * b == b * a, "pi_arith: commutative product");
    v.check((a * b) / PiValue::pi_power(-1, 5) == a, "pi_arith: monomial division");
    v.check(pi_value_json(a).dump() == pi_value_json(a).dump(),
            "pi_arith: serialization determinism");
  }

  // --- strata volumes ---
  v.check(volume(parse_signature("Q(1,-1^5)")) == PiValue::pi_power(4),
          "strata: Vol Q(1,-1^5) = pi^4");
  v.check(volume(parse_signature("Q(2,-1^6)")) ==
              PiValue::pi_power(4, Rational(8, 3)),
          "strata: Vol Q(2,-1^6) = 8/3*pi^4");
  {
    auto sigs = enumerate_signatures(8, false);
    auto again = enumerate_signatures(8, false);
    bool same = sigs.size() == again.size();
    for (size_t i = 0; same && i < sigs.size(); ++i)
      same = sigs[i].str() == again[i].str();
    v.check(same, "strata: enumeration determinism",
            std::to_string(sigs.size()) + " signatures with k <= 8");
  }

  // --- Siegel-Veech closed forms vs volume ratios; the c_area identity ---
  {
    long configs = 0;
    bool ok = true;
    for (const auto& sig : enumerate_signatures(7, false)) {
      try {
        configs += verify_closed_vs_ratio(sig);
      } catch (const VerificationError&) {
        ok = false;
      }
    }
    v.check(ok, "siegel_veech: closed = ratio forms, k <= 7",
            std::to_string(configs) + " configurations");
    bool id_ok = true;
    long checked = 0;
    for (const auto& sig : enumerate_signatures(7, false)) {
      if (sig.orders().size() < 5 || sig.is_pillowcase()) continue;
      if (!verify_carea_identity(sig).holds) id_ok = false;
      ++checked;
    }
    v.check(id_ok, "siegel_veech: c_area identity, 5 <= k <= 7",
            std::to_string(checked) + " signatures");
    v.check(billiard_pair_table_constant(1, 1) ==
                    PiValue::pi_power(-2, Rational(1, 2)) &&
                billiard_pair_table_constant(3, 3) ==
                    PiValue::pi_power(-2, Rational(16, 3)) &&
                billiard_pair_table_constant(4, 4) == Rational(9, 10),
            "siegel_veech: corner-pair table spot values");
  }

  // --- identity lab ---
  {
    bool ok = true;
    long cases = 0;
    std::vector<int> d;
    auto sweep = [&](auto&& self, int m) -> void {
      if (m == 0) {
        if (!d.empty()) {
          if (!verify_apr2012(d).holds) ok = false;
          ++cases;
        }
        return;
      }
      for (int x = 0; x <= 4; ++x) {
        d.push_back(x);
        self(self, m - 1);
        d.pop_back();
      }
    };
    for (int m = 1; m <= 3; ++m) sweep(sweep, m);
    std::mt19937 rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> r(1 + rng() % 6);
      for (int& x : r) x = static_cast<int>(rng() % 7);
      if (!verify_apr2012(r).holds) ok = false;
      ++cases;
    }
    v.check(ok, "identity_lab: subset-sum identity",
            std::to_string(cases) + " degree vectors");

    bool mok = true;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> b(1 + rng() % 3);
      for (int& x : b) x = 1 + static_cast<int>(rng() % 5);
      int a = 1 + static_cast<int>(rng() % 4);
      TruncatedSeries za = solve_mohanty_z(b, 5).pow(a);
      for (const auto& k : exponent_vectors(static_cast<int>(b.size()), 5))
        if (za.coeff(k) != mohanty_coefficient(a, b, k)) mok = false;
    }
    v.check(mok, "identity_lab: Mohanty coefficients to degree 5");

    bool fok = true;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> dd(1 + rng() % 2);
      for (int& x : dd) x = static_cast<int>(rng() % 4);
      if (!verify_F2_equals_G(dd, 5).holds) fok = false;
    }
    v.check(fok, "identity_lab: F^2 = G to degree 5");
  }

  // --- flat sphere / billiards ---
  {
    RectilinearPolygon L;
    L.vertices = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    Table t = validate(L);
    v.check(doubled_stratum(t).str() == "Q(1,-1^5)",
            "flat_sphere: L-shape doubles to Q(1,-1^5)");
    auto recs = enumerate_diagonals(t, 0, 400, workers);
    bool chains_ok = true;
    for (const auto& r : recs)
      if (!verify_chain(t, r)) chains_ok = false;
    v.check(chains_ok, "flat_sphere: reflection chains reconstruct",
            std::to_string(recs.size()) + " records at L^2 = 400");
    v.check(recs == enumerate_diagonals(t, 0, 400, 1),
            "flat_sphere: worker-count independence");
    SaddleConnection notch;
    for (const auto& r : enumerate_diagonals(t, 0, 5, workers))
      if (r.target == 4 && r.dx == 1 && r.dy == 2) notch = r;
    Band band = trace_band(t, notch);
    v.check(band.circumference_sq == 20 && band.width_sq == Rational(1, 5) &&
                band.area_weight == Rational(2, 3),
            "flat_sphere: notch band geometry");
    PairCounts counts = count_by_pair(t, 400, false, workers);
    std::ostringstream cs;
    for (const auto& [pr, n] : counts)
      cs << "(" << pr.first << "," << pr.second << ")=" << n << " ";
    v.check(counts == count_by_pair(t, 400, false, 1),
            "flat_sphere: pair counts at L^2 = 400", cs.str());
  }

  // --- pillowcase covers ---
  {
    bool ok = true;
    std::vector<CoverSpec> specs = {
        validate_spec({}, {1, 1, 1, 1}, 1),
        validate_spec({}, {1, 1, 1, 1}, 2),
        validate_spec({}, {3, 1, 1, 1, 1, 1}, 2),
        validate_spec({2}, {1, 1, 1, 1, 1, 1}, 2),
    };
    for (const auto& spec : specs)
      if (count_covers_backtracking(spec, false, true) !=
          count_covers_character(spec))
        ok = false;
    v.check(ok, "pillowcase: backtracking = character formula, 4d <= 8");
    SqCounts sq = sq_count(parse_signature("Q(-1^4)"), 5);
    bool mono = true;
    for (size_t i = 1; i < sq.cumulative.size(); ++i)
      if (sq.cumulative[i] < sq.cumulative[i - 1]) mono = false;
    std::ostringstream ss;
    for (const auto& n : sq.per_degree) ss << n << " ";
    v.check(mono, "pillowcase: Sq_N monotone for Q(-1^4)", ss.str());
    TrendReport r1 = volume_trend(parse_signature("Q(-1^4)"), 5);
    TrendReport r2 = volume_trend(parse_signature("Q(-1^4)"), 5);
    bool det = r1.rows.size() == r2.rows.size();
    for (size_t i = 0; det && i < r1.rows.size(); ++i)
      det = r1.rows[i].normalized == r2.rows[i].normalized;
    v.check(det, "pillowcase: volume trend determinism");
  }

  std::cout << (v.all_ok ? "VERIFY-ALL PASS" : "VERIFY-ALL FAIL") << "\n";
  return v.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact volumes, Siegel-Veech constants, billiard diagonal "
               "counts, and pillowcase covers for genus-0 flat spheres"};
  app.require_subcommand(1);

  // volume
  std::string sig_str;
  int digits = 12;
  bool as_json = false;
  auto* cmd_volume = app.add_subcommand("volume", "Exact stratum volume");
  cmd_volume->add_option("signature", sig_str, "e.g. Q(1,-1^5)")->required();
  cmd_volume->add_option("--digits", digits, "decimal digits");
  cmd_volume->add_flag("--json", as_json, "emit JSON terms");

  // sv
  std::string sv_pair, sv_sig;
  int sv_pocket = -1;
  bool sv_area = false;
  auto* cmd_sv = app.add_subcommand("sv", "Siegel-Veech constants");
  cmd_sv->add_option("signature", sv_sig)->required();
  cmd_sv->add_option("--pair", sv_pair,
                     "type I constant for singularities i,j (1-based)");
  cmd_sv->add_option("--pocket", sv_pocket,
                     "type III pocket constant for zero i (1-based)");
  cmd_sv->add_flag("--area", sv_area, "c_area of the stratum");

  // carea
  std::string carea_sig;
  auto* cmd_carea =
      app.add_subcommand("carea", "c_area with the configuration identity");
  cmd_carea->add_option("signature", carea_sig)->required();

  // identity / mohanty / f2g
  std::string id_d, mo_b, f2g_d;
  int mo_a = 1, mo_D = 6, f2g_D = 5;
  auto* cmd_identity =
      app.add_subcommand("identity", "subset-sum identity for a degree vector");
  cmd_identity->add_option("--d", id_d, "comma-separated degrees, e.g. 0 or 1,2")
      ->required();
  auto* cmd_mohanty = app.add_subcommand(
      "mohanty", "check z^a coefficients against the closed form");
  cmd_mohanty->add_option("--a", mo_a)->required();
  cmd_mohanty->add_option("--b", mo_b, "comma-separated exponents")->required();
  cmd_mohanty->add_option("--degree", mo_D, "series truncation degree");
  auto* cmd_f2g = app.add_subcommand("f2g", "check F^2 = G as truncated series");
  cmd_f2g->add_option("--d", f2g_d, "comma-separated degrees")->required();
  cmd_f2g->add_option("--degree", f2g_D, "series truncation degree");

  // billiard
  std::string poly_path, b_pair, report_pairs;
  std::string lsq_str = "100";
  int workers = 1, steps = 4;
  bool include_axis = false;
  auto* cmd_billiard = app.add_subcommand("billiard", "diagonal counting");
  cmd_billiard->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--polygon", poly_path, "polygon JSON file")->required();
    c->add_option("--Lsq", lsq_str, "squared length bound (rational)");
    c->add_option("--workers", workers, "search worker count");
  };
  auto* cmd_bcount = cmd_billiard->add_subcommand(
      "count", "diagonal counts per corner pair (CSV)");
  add_common(cmd_bcount);
  cmd_bcount->add_option("--pair", b_pair, "restrict to corners i,j (1-based)");
  cmd_bcount->add_flag("--include-axis", include_axis,
                       "count axis-parallel diagonals too");
  auto* cmd_bbands = cmd_billiard->add_subcommand(
      "bands", "bands bounded by pole-pole diagonals (CSV)");
  add_common(cmd_bbands);
  auto* cmd_breport = cmd_billiard->add_subcommand(
      "report", "count/L^2 trend against the predicted constant (CSV)");
  add_common(cmd_breport);
  cmd_breport->add_option("--steps", steps, "geometric L^2 grid size");
  cmd_breport->add_option("--pairs", report_pairs,
                          "semicolon-separated corner pairs, e.g. 1,3;1,4");

  // pillowcase
  std::string pc_eta, pc_nu, pc_sig;
  int pc_d = 1, pc_N = 4;
  bool pc_connected = false;
  auto* cmd_pillow = app.add_subcommand("pillowcase", "cover counting");
  cmd_pillow->require_subcommand(1);
  auto* cmd_pcount = cmd_pillow->add_subcommand("count", "covers for (eta, nu, d)");
  cmd_pcount->add_option("--eta", pc_eta, "comma-separated parts (may be empty)");
  cmd_pcount->add_option("--nu", pc_nu, "comma-separated odd parts")->required();
  cmd_pcount->add_option("--d", pc_d, "degree parameter (cover degree 4d)")
      ->required();
  cmd_pcount->add_flag("--connected", pc_connected, "connected covers only");
  auto* cmd_ptrend =
      cmd_pillow->add_subcommand("trend", "normalized count vs exact volume");
  cmd_ptrend->add_option("--signature", pc_sig, "square-tiled trend for Q(...)");
  cmd_ptrend->add_option("--eta", pc_eta, "cover trend: eta parts");
  cmd_ptrend->add_option("--nu", pc_nu, "cover trend: nu parts");
  cmd_ptrend->add_option("--d", pc_d, "cover trend: starting d (ignored)");
  cmd_ptrend->add_option("--N", pc_N, "trend horizon");

  // verify-all
  unsigned seed = 0;
  auto* cmd_verify = app.add_subcommand(
      "verify-all", "run every module's invariant suite deterministically");
  cmd_verify->add_option("--seed", seed, "seed for randomized sweeps");
  cmd_verify->add_option("--workers", workers, "search worker count");

  try {
    app.parse(argc, argv);

    if (*cmd_volume) {
      PiValue vol = volume(parse_signature(sig_str));
      if (as_json) {
        std::cout << pi_value_json(vol).dump() << "\n";
      } else {
        std::cout << vol.str() << "\n";
        std::cout << to_decimal(vol, digits) << "\n";
      }
    } else if (*cmd_sv) {
      StratumSignature sig = parse_signature(sv_sig);
      if (!sv_pair.empty()) {
        auto [i, j] = parse_pair(sv_pair);
        PiValue c = c_type1(sig, i - 1, j - 1);
        std::cout << "c_I = " << c.str() << "\n";
        auto ratio = c_type1_ratio(sig, i - 1, j - 1);
        if (ratio) {
          if (*ratio != c)
            throw VerificationError("type I ratio form disagrees");
          std::cout << "ratio check: ok\n";
        }
      } else if (sv_pocket >= 1) {
        std::cout << "c_pocket = " << c_pocket(sig, sv_pocket - 1).str() << "\n";
      } else if (sv_area) {
        std::cout << "c_area = " << c_area(sig).str() << "\n";
      } else {
        throw InputError("sv: choose one of --pair, --pocket, --area");
      }
    } else if (*cmd_carea) {
      CareaIdentityReport rep = verify_carea_identity(parse_signature(carea_sig));
      json out{{"signature", rep.sig.str()},
               {"lhs", rep.lhs.str()},
               {"rhs", rep.rhs.str()},
               {"holds", rep.holds},
               {"pockets", rep.pockets},
               {"dumbbells", rep.dumbbells}};
      std::cout << out.dump() << "\n";
      if (!rep.holds) return 1;
    } else if (*cmd_identity) {
      Apr2012Report rep = verify_apr2012(parse_int_list(id_d));
      json out{{"identity", "apr2012"},
               {"input", rep.d},
               {"lhs", rational_str(rep.lhs)},
               {"rhs", rational_str(rep.rhs)},
               {"holds", rep.holds}};
      std::cout << out.dump() << "\n";
      if (!rep.holds) return 1;
    } else if (*cmd_mohanty) {
      std::vector<int> b = parse_int_list(mo_b);
      if (b.empty()) throw InputError("mohanty: --b must be nonempty");
      TruncatedSeries za = solve_mohanty_z(b, mo_D).pow(mo_a);
      bool holds = true;
      for (const auto& k : exponent_vectors(static_cast<int>(b.size()), mo_D))
        if (za.coeff(k) != mohanty_coefficient(mo_a, b, k)) holds = false;
      json out{{"identity", "mohanty"},
               {"input", {{"a", mo_a}, {"b", b}}},
               {"holds", holds},
               {"max_degree", mo_D}};
      std::cout << out.dump() << "\n";
      if (!holds) return 1;
    } else if (*cmd_f2g) {
      F2GReport rep = verify_F2_equals_G(parse_int_list(f2g_d), f2g_D);
      json out{{"identity", "F2G"},
               {"input", rep.d},
               {"holds", rep.holds},
               {"max_degree", rep.max_degree}};
      std::cout << out.dump() << "\n";
      if (!rep.holds) return 1;
    } else if (*cmd_bcount) {
      Table t = load_table(poly_path);
      Rational L_sq = parse_rational(lsq_str);
      PairCounts counts = count_by_pair(t, L_sq, include_axis, workers);
      int fi = -1, fj = -1;
      if (!b_pair.empty()) {
        auto [i, j] = parse_pair(b_pair);
        fi = std::min(i, j) - 1;
        fj = std::max(i, j) - 1;
      }
      std::cout << "L_sq,source,target,count,count_over_L2,predicted\n";
      for (const auto& [pr, n] : counts) {
        if (fi >= 0 && (pr.first != fi || pr.second != fj)) continue;
        std::cout << rational_str(L_sq) << "," << pr.first + 1 << ","
                  << pr.second + 1 << "," << n << ","
                  << rational_str(Rational(n) / L_sq) << ",";
        if (pr.first != pr.second)
          std::cout << to_decimal(predicted_rate(t, pr.first, pr.second),
                                  digits);
        std::cout << "\n";
      }
    } else if (*cmd_bbands) {
      Table t = load_table(poly_path);
      Rational L_sq = parse_rational(lsq_str);
      std::cout << "source,target,dx,dy,length_sq,kind,circumference_sq,"
                   "width_sq,area_weight,degenerate\n";
      for (int src = 0; src < t.size(); ++src)
        for (const auto& r : enumerate_diagonals(t, src, L_sq, workers)) {
          if (r.parallel_to_side) continue;
          if (classify(t, r).kind != ConfigKind::IIIShort) continue;
          if (r.target < r.source) continue;  // each diagonal once
          Band band = trace_band(t, r);
          std::cout << r.source + 1 << "," << r.target + 1 << ","
                    << rational_str(r.dx) << "," << rational_str(r.dy) << ","
                    << rational_str(r.length_sq) << ","
                    << (band.kind == BandKind::III ? "III" : "IV") << ","
                    << rational_str(band.circumference_sq) << ","
                    << rational_str(band.width_sq) << ","
                    << rational_str(band.area_weight) << ","
                    << (band.degenerate ? 1 : 0) << "\n";
        }
    } else if (*cmd_breport) {
      Table t = load_table(poly_path);
      Rational L_sq = parse_rational(lsq_str);
      std::vector<std::pair<int, int>> pairs;
      std::stringstream ss(report_pairs);
      std::string tok;
      while (std::getline(ss, tok, ';'))
        if (!tok.empty()) {
          auto [i, j] = parse_pair(tok);
          pairs.push_back({i - 1, j - 1});
        }
      if (pairs.empty()) throw InputError("report: --pairs is required");
      std::cout << "L_sq,source,target,count,count_over_L2,predicted\n";
      for (const auto& row :
           asymptotic_report(t, pairs, L_sq, steps, false, workers))
        std::cout << rational_str(row.l_sq) << "," << row.source + 1 << ","
                  << row.target + 1 << "," << row.count << ","
                  << rational_str(row.count_over_l2) << ","
                  << to_decimal(row.predicted, digits) << "\n";
    } else if (*cmd_pcount) {
      CoverSpec spec = validate_spec(parse_int_list(pc_eta),
                                     parse_int_list(pc_nu), pc_d);
      Rational weighted = count_covers_backtracking(spec, pc_connected, true);
      Rational orbits = count_covers_backtracking(spec, pc_connected, false);
      bool oracle_match = true;
      if (!pc_connected)
        oracle_match = (weighted == count_covers_character(spec));
      json out{{"eta", spec.eta},
               {"nu", spec.nu},
               {"d", spec.d},
               {"stratum", spec.stratum.str()},
               {"connected", pc_connected},
               {"count", rational_str(orbits)},
               {"weighted", rational_str(weighted)},
               {"oracle_match", oracle_match}};
      std::cout << out.dump() << "\n";
      if (!oracle_match) return 1;
    } else if (*cmd_ptrend) {
      TrendReport rep;
      if (!pc_sig.empty())
        rep = volume_trend(parse_signature(pc_sig), pc_N);
      else
        rep = volume_trend(
            validate_spec(parse_int_list(pc_eta), parse_int_list(pc_nu), 1),
            pc_N);
      std::cout << "stratum " << rep.stratum.str() << ", dim " << rep.dim
                << ", target " << rep.target.str() << " = "
                << to_decimal(rep.target, digits) << "\n";
      std::cout << "N,normalized,normalized_weighted\n";
      for (const auto& row : rep.rows)
        std::cout << row.N << "," << rational_str(row.normalized) << ","
                  << rational_str(row.normalized_weighted) << "\n";
    } else if (*cmd_verify) {
      return run_verify_all(seed, workers);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
