// Acceptance checks: one pass/fail line per criterion, exit 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cjid/catalog.hpp"
#include "cjid/engine.hpp"
#include "cjid/parser.hpp"

using namespace cjid;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
  std::printf("%s  [%2d] %s%s%s\n", ok ? "PASS" : "FAIL", n, what,
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++failures;
}

double simpson(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double eps, int depth) {
  double c = 0.5 * (a + b);
  double left = simpson(f, a, c);
  double right = simpson(f, c, b);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, c, left, 0.5 * eps, depth - 1) +
         adaptive(f, c, b, right, 0.5 * eps, depth - 1);
}

double F_incomplete(double phi, double m) {
  auto f = [m](double th) {
    double s = std::sin(th);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  };
  return adaptive(f, 0.0, phi, simpson(f, 0.0, phi), 1e-14, 40);
}

double sn_oracle(double x, double m) {
  double lo = 0.0, hi = std::asin(1.0);
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (F_incomplete(mid, m) < x ? lo : hi) = mid;
  }
  return std::sin(0.5 * (lo + hi));
}

// Refits the known constants of a spec and compares them with the bundled
// closed forms; relative tolerance widened by the fit's own uncertainty
// estimate where the design degenerates at extreme m.
bool constants_match(const IdentitySpec& s, const SampleGrid& grid,
                     std::string& detail) {
  IdentitySpec refit = s;
  for (const auto& [sym, closed] : s.constants_known) refit.to_fit.insert(sym);
  refit.constants_known.clear();
  auto fit = fit_constants(refit, grid);
  for (const auto& r : fit.records) {
    for (const auto& [sym, closed] : s.constants_known) {
      double want = closed_form_value(closed, r.m);
      double tol = std::max(1e-8 * std::max(1.0, std::fabs(want)),
                            3.0 * r.sigma.at(sym));
      if (std::fabs(r.values.at(sym) - want) > tol) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s %c at m=%g: fit %.12g vs %.12g",
                      s.name.c_str(), sym, r.m, r.values.at(sym), want);
        detail = buf;
        return false;
      }
    }
  }
  return true;
}

bool verify_all(const std::vector<IdentitySpec>& specs, const SampleGrid& grid,
                std::string& detail, double tol = kDefaultTolerance) {
  for (const auto& s : specs) {
    auto rep = verify(s, grid, tol);
    if (!rep.pass) {
      double worst = 0;
      for (const auto& r : rep.records) worst = std::max(worst, r.max_residual);
      detail = s.name + " worst residual " + std::to_string(worst);
      return false;
    }
  }
  return true;
}

std::vector<IdentitySpec> family_instances(const std::string& eq, int pmax) {
  const CatalogEntry* e = find_entry(eq);
  std::vector<IdentitySpec> out = e->specs;
  if (!e->family) return out;
  const FamilySpec& f = *e->family;
  for (int p = f.min_p; p <= pmax; ++p) {
    if (f.parity == FamilySpec::Parity::Even && p % 2) continue;
    if (f.parity == FamilySpec::Parity::Odd && p % 2 == 0) continue;
    auto got = instantiate_family(f, p);
    out.insert(out.end(), got.begin(), got.end());
  }
  return out;
}

void criterion1() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ux(-10.0, 10.0), um(0.0, 1.0);
  bool ok = true;
  for (int i = 0; i < 10000 && ok; ++i) {
    double x = ux(rng), m = um(rng);
    auto t = jacobi(x, ModulusParam(m));
    ok = std::fabs(t.sn * t.sn + t.cn * t.cn - 1.0) < 1e-12 &&
         std::fabs(t.dn * t.dn + m * t.sn * t.sn - 1.0) < 1e-12;
  }
  for (int i = 0; i < 50 && ok; ++i) {
    double x = ux(rng);
    auto t0 = jacobi(x, ModulusParam(0.0));
    auto t1 = jacobi(x, ModulusParam(1.0));
    ok = std::fabs(t0.sn - std::sin(x)) < 1e-13 &&
         std::fabs(t0.cn - std::cos(x)) < 1e-13 &&
         std::fabs(t0.dn - 1.0) < 1e-13 &&
         std::fabs(t1.sn - std::tanh(x)) < 1e-13 &&
         std::fabs(t1.cn - 1.0 / std::cosh(x)) < 1e-13 &&
         std::fabs(t1.dn - 1.0 / std::cosh(x)) < 1e-13;
  }
  report(1, "core relations and endpoint limits", ok);
}

void criterion2() {
  bool ok = true;
  std::string detail;
  for (double m = 0.1; m < 0.95; m += 0.1) {
    auto f = [m](double th) {
      double s = std::sin(th);
      return 1.0 / std::sqrt(1.0 - m * s * s);
    };
    double K_q = adaptive(f, 0.0, std::asin(1.0),
                          simpson(f, 0.0, std::asin(1.0)), 1e-14, 40);
    if (std::fabs(elliptic_K(m) - K_q) >= 1e-12) {
      ok = false;
      detail = "K quadrature mismatch at m=" + std::to_string(m);
    }
  }
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> um(0.05, 0.95);
  for (int i = 0; i < 20 && ok; ++i) {
    double m = um(rng);
    double K = elliptic_K(m);
    std::uniform_real_distribution<double> ux(0.05 * K, 0.95 * K);
    double x = ux(rng);
    if (std::fabs(jacobi(x, ModulusParam(m)).sn - sn_oracle(x, m)) >= 1e-11) {
      ok = false;
      detail = "sn inversion mismatch";
    }
  }
  report(2, "oracle equivalence for K and sn", ok, detail);
}

void criterion3() {
  SampleGrid grid = SampleGrid::defaults();
  std::string detail;
  std::vector<IdentitySpec> all;
  for (int n = 23; n <= 30; ++n) {
    auto specs = family_instances("E" + std::to_string(n), 10);
    all.insert(all.end(), specs.begin(), specs.end());
  }
  bool ok = verify_all(all, grid, detail);
  for (const auto& s : all) {
    if (!ok) break;
    if (s.p <= 4 && !s.constants_known.empty())
      ok = constants_match(s, grid, detail);
  }
  report(3, "table 1 verified with matching small-p constants", ok, detail);
}

void criterion4() {
  SampleGrid grid = SampleGrid::defaults();
  std::string detail;
  std::vector<IdentitySpec> all;
  for (int n = 31; n <= 55; ++n) {
    auto specs = select_eq("E" + std::to_string(n), std::nullopt, 9);
    all.insert(all.end(), specs.begin(), specs.end());
  }
  // General families including every substitution variant, p up to 9.
  for (int n = 56; n <= 66; ++n) {
    auto specs = family_instances("E" + std::to_string(n), 9);
    all.insert(all.end(), specs.begin(), specs.end());
  }
  bool ok = verify_all(all, grid, detail);
  report(4, "table 2 verified including substitution variants", ok, detail);
}

void criterion5() {
  SampleGrid grid = SampleGrid::defaults();
  std::string detail;
  std::vector<IdentitySpec> all;
  for (int n = 67; n <= 77; ++n) {
    auto specs = select_eq("E" + std::to_string(n), std::nullopt, 8);
    all.insert(all.end(), specs.begin(), specs.end());
  }
  for (const char* eq : {"E78", "E79"}) {
    auto specs = family_instances(eq, 8);
    all.insert(all.end(), specs.begin(), specs.end());
  }
  bool ok = verify_all(all, grid, detail);

  // Chain constants with printed closed forms: refit and compare.
  struct Case {
    int p;
    const char* lhs;
    char sym;
    std::function<double(double)> closed;
  };
  // References evaluated in extended precision: 1 - q^2 loses eight
  // digits at m = 1e-8 if q is first rounded to double.
  auto sv = [](double m) { return special_values_ld(ModulusParam(m)); };
  std::vector<Case> cases = {
      {2, "cyc(d[1]*d[2]) == A", 'A',
       [](double m) { return 2.0 * std::sqrt(1.0 - m); }},
      {3, "cyc(d[1]*d[2]) == A", 'A',
       [sv](double m) {
         auto v = sv(m);
         return static_cast<double>(v.q * (v.q + 2.0L));
       }},
      {4, "cyc(d[1]*d[2]) == A", 'A',
       [sv](double m) {
         auto v = sv(m);
         return static_cast<double>(2.0L * v.t * (1.0L + v.t * v.t));
       }},
      {3, "cyc(d[1]*d[2]*d[3]) == B*cyc(d[1])", 'B',
       [sv](double m) {
         auto v = sv(m);
         return static_cast<double>(3.0L * (m / (1.0L - v.q * v.q) - 1.0L));
       }},
      {4, "cyc(d[1]*d[2]*d[3]) == B*cyc(d[1])", 'B',
       [](double m) { return std::sqrt(1.0 - m); }},
      {4, "cyc(d[1]*d[2]*d[3]*d[4]) == A", 'A',
       [](double m) { return 4.0 * (1.0 - m); }},
  };
  for (const auto& c : cases) {
    if (!ok) break;
    auto spec =
        parse("@p " + std::to_string(c.p) + "\n" + c.lhs + "\n").at(0);
    auto fit = fit_constants(spec, grid);
    for (const auto& r : fit.records) {
      double want = c.closed(r.m);
      double tol = std::max(1e-8 * std::max(1.0, std::fabs(want)),
                            3.0 * r.sigma.at(c.sym));
      if (std::fabs(r.values.at(c.sym) - want) > tol) {
        ok = false;
        detail = "chain constant mismatch p=" + std::to_string(c.p) +
                 " at m=" + std::to_string(r.m);
        break;
      }
    }
  }
  report(5, "table 3 verified and chain constants reproduced", ok, detail);
}

void criterion6() {
  bool ok = true;
  std::string detail;
  // m -> 0: every consecutive-chain constant tends to p (even length)
  // or 1 (odd length).
  SampleGrid g0;
  g0.m_values = {1e-8};
  for (int p = 2; p <= 5 && ok; ++p) {
    for (int r = 2; r <= p && ok; ++r) {
      std::string prod = "d[1]";
      for (int i = 2; i <= r; ++i) prod += "*d[" + std::to_string(i) + "]";
      std::string rhs = r % 2 == 0 ? "A" : "B*cyc(d[1])";
      auto spec = parse("@p " + std::to_string(p) + "\ncyc(" + prod +
                        ") == " + rhs + "\n")
                      .at(0);
      auto fit = fit_constants(spec, g0);
      char sym = r % 2 == 0 ? 'A' : 'B';
      double want = r % 2 == 0 ? p : 1.0;
      if (std::fabs(fit.records[0].values.at(sym) - want) > 1e-5) {
        ok = false;
        detail = "m->0 limit off at p=" + std::to_string(p) +
                 " r=" + std::to_string(r);
      }
    }
  }
  // m -> 1: the full-length chain constants vanish; check the bound at
  // 1-1e-6 and monotone decrease across three moduli.
  for (int p = 2; p <= 5 && ok; ++p) {
    std::string prod = "d[1]";
    for (int i = 2; i <= p; ++i) prod += "*d[" + std::to_string(i) + "]";
    std::string rhs = p % 2 == 0 ? "A" : "B*cyc(d[1])";
    auto spec =
        parse("@p " + std::to_string(p) + "\ncyc(" + prod + ") == " + rhs +
              "\n")
            .at(0);
    SampleGrid g1;
    g1.m_values = {1.0 - 1e-4, 1.0 - 1e-5, 1.0 - 1e-6};
    auto fit = fit_constants(spec, g1);
    char sym = p % 2 == 0 ? 'A' : 'B';
    double a = std::fabs(fit.records[0].values.at(sym));
    double b = std::fabs(fit.records[1].values.at(sym));
    double c = std::fabs(fit.records[2].values.at(sym));
    if (!(c <= 1e-2 && c < b && b < a)) {
      ok = false;
      detail = "m->1 decay off at p=" + std::to_string(p);
    }
  }
  report(6, "chain-constant limits at the modulus endpoints", ok, detail);
}

void criterion7() {
  bool ok = true;
  for (double m : SampleGrid::default_m_values()) {
    auto v = special_values(ModulusParam(m));
    double quartic = std::pow(v.q, 4) + 2.0 * std::pow(v.q, 3) +
                     (m - 1.0) * (2.0 * v.q + 1.0);
    double K = elliptic_K(m);
    double t_direct = jacobi(0.5 * K, ModulusParam(m)).dn;
    if (std::fabs(quartic) > 1e-11 ||
        std::fabs(t_direct - std::pow(1.0 - m, 0.25)) > 1e-11)
      ok = false;
  }
  report(7, "special values satisfy their closed forms", ok);
}

void criterion8() {
  bool ok = true;
  std::string detail;
  SampleGrid grid = SampleGrid::defaults();
  for (int p = 3; p <= 8 && ok; ++p) {
    auto base =
        parse("@p " + std::to_string(p) + "\ncyc(d[1]*d[2]) == A\n").at(0);
    auto derived = differentiate(base);
    if (!verify(derived, grid, 1e-8).pass) {
      ok = false;
      detail = "derived identity fails at p=" + std::to_string(p);
      break;
    }
    // Trigonometric limit: the derivative collapses to a sum of equally
    // spaced sin(2x + ...) terms, identically zero at m = 0.
    for (int j = 0; j < 16 && ok; ++j) {
      double x = 0.11 + j * 0.39;
      if (std::fabs(evaluate(derived.lhs, x, ModulusParam(0.0), p)) > 1e-12) {
        ok = false;
        detail = "trig limit fails at p=" + std::to_string(p);
      }
    }
  }

  // The alternating rank-3 constant recovered by multiplying the p = 4
  // neighbour-product identity by the alternating sum d1-d2+d3-d4.
  if (ok) {
    auto route = parse(
                     "@p 4\n"
                     "cyc(d[1]*d[2])*acyc(d[1])"
                     " == A*acyc(d[1]) - 2*sqrt(1-m)*acyc(d[1])\n")
                     .at(0);
    auto fit = fit_constants(route, grid);
    for (const auto& r : fit.records) {
      double t = special_values(ModulusParam(r.m)).t;
      double want = 2.0 * t * (1.0 + t + t * t);
      double tol = std::max(1e-8 * std::fabs(want), 3.0 * r.sigma.at('A'));
      if (std::fabs(r.values.at('A') - want) > tol) {
        ok = false;
        detail = "alternating constant mismatch at m=" + std::to_string(r.m);
        break;
      }
    }
  }
  report(8, "derivation pipeline and the alternating-sum route", ok, detail);
}

void criterion9() {
  bool ok = true;
  for (double m : {0.2, 0.5, 0.8}) {
    double Kp = elliptic_K(1.0 - m);
    double root = 1.0 / std::sqrt(m);
    for (int j = 0; j < 16; ++j) {
      double u = 0.17 + 0.31 * j;
      auto a = jacobi(u, ModulusParam(m));
      auto b = jacobi_complex(u, Kp, ModulusParam(m));
      if (std::abs(a.sn * b.sn - std::complex<double>(root)) > 1e-9) ok = false;
    }
  }
  // Same fact through the translation operation on the catalog entry.
  if (ok) {
    auto e23 = select_eq("E23", std::nullopt, 4).at(0);
    auto translated = imaginary_translate(e23);
    SampleGrid g;
    g.m_values = {0.2, 0.5, 0.8};
    g.x_count = 16;
    ok = verify(translated, g).pass && !imaginary_translate(translated).imaginary;
  }
  report(9, "imaginary translation of the antipodal product", ok);
}

void criterion10() {
  SampleGrid grid = SampleGrid::defaults();
  std::string detail;
  auto specs = parse(
      "@p 6\n"
      "@const A sqrt(1-m)\n@name \"sub14\"\nd[1]*d[4] == A\n"
      "@const A sqrt(1-m)\n@name \"sub25\"\nd[2]*d[5] == A\n"
      "@const A sqrt(1-m)\n@name \"sub36\"\nd[3]*d[6] == A\n"
      "@const A q^2+2*q\n@name \"sub135\"\n"
      "d[1]*d[3]+d[3]*d[5]+d[5]*d[1] == A\n");
  bool ok = verify_all(specs, grid, detail);
  report(10, "sub-identities of the composite lattice p = 6", ok, detail);
}

void criterion11() {
  SampleGrid grid = SampleGrid::defaults();
  bool ok = true;
  std::string detail;
  int tested = 0;
  for (const auto& e : load_catalog()) {
    for (const auto& s : e.specs) {
      for (const auto& [sym, closed] : s.constants_known) {
        IdentitySpec bad = s;
        bad.constants_known[sym] = prod_node(
            {div_node(num_node(1001), num_node(1000)), closed});
        auto rep = verify(bad, grid);
        int failed = 0;
        for (const auto& r : rep.records)
          if (!r.pass) ++failed;
        ++tested;
        if (failed * 100 < 95 * static_cast<int>(rep.records.size())) {
          ok = false;
          detail = s.name + " constant " + sym + " survives perturbation (" +
                   std::to_string(failed) + "/" +
                   std::to_string(rep.records.size()) + ")";
        }
      }
    }
  }
  if (tested < 40) {
    ok = false;
    detail = "too few perturbable constants";
  }
  report(11, "perturbed constants are rejected", ok, detail);
}

void criterion12() {
  // The printed bracket of the squared p = 3 identity admits two
  // groupings; the fit decides.  Reading 1 treats the fraction as the
  // single term 6m/(1-q^2); reading 2 puts (1-q^2)^2 + 6m over 1-q^2.
  SampleGrid grid = SampleGrid::defaults();
  auto spec = select_eq("E18", 3, 4).at(0);
  auto fit = fit_constants(spec, grid);
  bool r1_ok = true, r2_ok = true;
  for (const auto& r : fit.records) {
    long double q = special_values_ld(ModulusParam(r.m)).q;
    long double u = 1.0L - q * q;
    double c1 = static_cast<double>(u * u + 6.0L * r.m / u - 3.0L - 4.0L * r.m);
    double c2 =
        static_cast<double>((u * u + 6.0L * r.m) / u - 3.0L - 4.0L * r.m);
    double got = r.values.at('C');
    double slack = 3.0 * r.sigma.at('C');
    if (std::fabs(got - c1) > 1e-8 * std::max(1.0, std::fabs(c1)) + slack)
      r1_ok = false;
    if (std::fabs(got - c2) > 1e-8 * std::max(1.0, std::fabs(c2)) + slack)
      r2_ok = false;
  }
  bool ok = r1_ok != r2_ok;
  std::string detail =
      r1_ok ? "matches (1-q^2)^2 + 6m/(1-q^2) - 3 - 4m"
            : (r2_ok ? "matches ((1-q^2)^2 + 6m)/(1-q^2) - 3 - 4m"
                     : "matches neither reading");
  report(12, "squared-identity constant resolved to one reading", ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  if (failures) std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
