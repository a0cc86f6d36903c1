#include <cmath>
#include <doctest.h>
#include <functional>
#include <random>

#include "cjid/elliptic.hpp"

using namespace cjid;

namespace {

// Adaptive Simpson quadrature, used as an implementation-independent
// oracle for the elliptic integrals.
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

double integrate(const std::function<double(double)>& f, double a, double b,
                 double eps = 1e-14) {
  return adaptive(f, a, b, simpson(f, a, b), eps, 40);
}

double K_oracle(double m) {
  auto f = [m](double th) {
    double s = std::sin(th);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  };
  return integrate(f, 0.0, std::asin(1.0));
}

// Incomplete integral F(phi, m); sn is its inverse via sn(x) = sin(phi).
double F_incomplete(double phi, double m) {
  auto f = [m](double th) {
    double s = std::sin(th);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  };
  return integrate(f, 0.0, phi);
}

double sn_oracle(double x, double m) {
  // Bisection on F(phi, m) = x for x in (0, K).
  double lo = 0.0, hi = std::asin(1.0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (F_incomplete(mid, m) < x ? lo : hi) = mid;
  }
  return std::sin(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("modulus parameter rejects values outside [0,1]") {
  CHECK_THROWS_AS(ModulusParam(-0.1), std::domain_error);
  CHECK_THROWS_AS(ModulusParam(1.1), std::domain_error);
  CHECK_THROWS_AS(ModulusParam(std::nan("")), std::domain_error);
  CHECK(ModulusParam(0.0).value() == 0.0);
  CHECK(ModulusParam(1.0).value() == 1.0);
}

TEST_CASE("K at the endpoints") {
  CHECK(elliptic_K(0.0) == doctest::Approx(std::asin(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(elliptic_K(1.0), EllipticError);
  auto qp = complete_K(ModulusParam(0.0));
  CHECK(std::isinf(qp.Kprime));
  CHECK_THROWS_AS(complete_K(ModulusParam(1.0)), EllipticError);
}

TEST_CASE("K matches the quadrature oracle") {
  for (double m : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
    CHECK(std::fabs(elliptic_K(m) - K_oracle(m)) < 1e-12);
    auto qp = complete_K(ModulusParam(m));
    CHECK(qp.K == doctest::Approx(elliptic_K(m)).epsilon(1e-14));
    CHECK(qp.Kprime == doctest::Approx(elliptic_K(1.0 - m)).epsilon(1e-14));
  }
}

TEST_CASE("K is strictly increasing in m") {
  double prev = 0.0;
  for (double m = 0.0; m < 0.999; m += 0.05) {
    double K = elliptic_K(m);
    CHECK(K > prev);
    prev = K;
  }
}

TEST_CASE("jacobi limits at m = 0 and m = 1") {
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9, 5.2}) {
    auto t0 = jacobi(x, ModulusParam(0.0));
    CHECK(std::fabs(t0.sn - std::sin(x)) < 1e-13);
    CHECK(std::fabs(t0.cn - std::cos(x)) < 1e-13);
    CHECK(std::fabs(t0.dn - 1.0) < 1e-13);
    auto t1 = jacobi(x, ModulusParam(1.0));
    CHECK(std::fabs(t1.sn - std::tanh(x)) < 1e-13);
    CHECK(std::fabs(t1.cn - 1.0 / std::cosh(x)) < 1e-13);
    CHECK(std::fabs(t1.dn - 1.0 / std::cosh(x)) < 1e-13);
  }
  auto origin = jacobi(0.0, ModulusParam(0.37));
  CHECK(origin.sn == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(origin.cn == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(origin.dn == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("jacobi matches the integral-inversion oracle") {
  // sn(0.7, 0.3) by root-finding on the incomplete integral.
  CHECK(std::fabs(jacobi(0.7, ModulusParam(0.3)).sn - sn_oracle(0.7, 0.3)) <
        1e-11);
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> um(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    double m = um(rng);
    double K = elliptic_K(m);
    std::uniform_real_distribution<double> ux(0.05 * K, 0.95 * K);
    double x = ux(rng);
    CHECK(std::fabs(jacobi(x, ModulusParam(m)).sn - sn_oracle(x, m)) < 1e-11);
  }
}

TEST_CASE("pythagorean relations hold everywhere") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(-12.0, 12.0), um(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double x = ux(rng), m = um(rng);
    auto t = jacobi(x, ModulusParam(m));
    CHECK(std::fabs(t.sn * t.sn + t.cn * t.cn - 1.0) < 1e-12);
    CHECK(std::fabs(t.dn * t.dn + m * t.sn * t.sn - 1.0) < 1e-12);
    if (m < 1.0) {
      CHECK(std::fabs(t.sn) <= 1.0 + 1e-12);
      CHECK(std::fabs(t.cn) <= 1.0 + 1e-12);
      CHECK(t.dn <= 1.0 + 1e-12);
      CHECK(t.dn >= std::sqrt(1.0 - m) - 1e-12);
    }
  }
}

TEST_CASE("periodicity in 4K and the 2K period of dn") {
  for (double m : {0.2, 0.5, 0.8, 0.95}) {
    double K = elliptic_K(m);
    for (double x : {0.13, 0.9, 2.4}) {
      auto a = jacobi(x, ModulusParam(m));
      auto b = jacobi(x + 4.0 * K, ModulusParam(m));
      CHECK(std::fabs(a.sn - b.sn) < 1e-10);
      CHECK(std::fabs(a.cn - b.cn) < 1e-10);
      CHECK(std::fabs(a.dn - b.dn) < 1e-10);
      CHECK(std::fabs(jacobi(x + 2.0 * K, ModulusParam(m)).dn - a.dn) < 1e-10);
      // Quarter-period product: dn(x) dn(x+K) = sqrt(1-m).
      CHECK(std::fabs(a.dn * jacobi(x + K, ModulusParam(m)).dn -
                      std::sqrt(1.0 - m)) < 1e-11);
    }
  }
}

TEST_CASE("special values: quartic for q and the closed form for t") {
  for (double m = 0.02; m < 1.0; m += 0.07) {
    auto sv = special_values(ModulusParam(m));
    double lhs = std::pow(sv.q, 4) + 2.0 * std::pow(sv.q, 3) +
                 (m - 1.0) * (2.0 * sv.q + 1.0);
    CHECK(std::fabs(lhs) < 1e-11);
    CHECK(std::fabs(sv.t - std::pow(1.0 - m, 0.25)) < 1e-11);
  }
  auto sv0 = special_values(ModulusParam(0.0));
  CHECK(sv0.q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sv0.t == doctest::Approx(1.0).epsilon(1e-12));
  auto sv84 = special_values(ModulusParam(0.84));
  CHECK(std::fabs(sv84.t - std::pow(0.16, 0.25)) < 1e-11);
}

TEST_CASE("dn addition theorem agrees with direct evaluation") {
  CHECK(std::fabs(dn_addition(0.4, 0.0, ModulusParam(0.6)) -
                  jacobi(0.4, ModulusParam(0.6)).dn) < 1e-13);
  CHECK(std::fabs(dn_addition(0.3, 0.9, ModulusParam(0.6)) -
                  jacobi(1.2, ModulusParam(0.6)).dn) < 1e-11);
  for (double m : {0.25, 0.5, 0.75}) {
    double K = elliptic_K(m);
    for (double u : {0.2, 1.1, 2.7}) {
      CHECK(std::fabs(dn_addition(u, K, ModulusParam(m)) -
                      std::sqrt(1.0 - m) / jacobi(u, ModulusParam(m)).dn) <
            1e-11);
      CHECK(std::fabs(dn_addition(u, K, ModulusParam(m)) -
                      jacobi(u + K, ModulusParam(m)).dn) < 1e-11);
    }
  }
}

TEST_CASE("derivative triple matches central finite differences") {
  auto d0 = derivative_triple(0.0, ModulusParam(0.42));
  CHECK(d0.dsn == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::fabs(d0.dcn) < 1e-13);
  CHECK(std::fabs(d0.ddn) < 1e-13);
  auto dm0 = derivative_triple(0.8, ModulusParam(0.0));
  CHECK(std::fabs(dm0.dsn - std::cos(0.8)) < 1e-13);
  CHECK(std::fabs(dm0.dcn + std::sin(0.8)) < 1e-13);
  CHECK(std::fabs(dm0.ddn) < 1e-13);

  const double h = 1e-6;
  for (double m : {0.15, 0.5, 0.85}) {
    for (double x : {0.3, 1.2, 2.9}) {
      auto d = derivative_triple(x, ModulusParam(m));
      auto hi = jacobi(x + h, ModulusParam(m));
      auto lo = jacobi(x - h, ModulusParam(m));
      CHECK(std::fabs(d.dsn - (hi.sn - lo.sn) / (2 * h)) < 1e-8);
      CHECK(std::fabs(d.dcn - (hi.cn - lo.cn) / (2 * h)) < 1e-8);
      CHECK(std::fabs(d.ddn - (hi.dn - lo.dn) / (2 * h)) < 1e-8);
    }
  }
}

TEST_CASE("imaginary-argument evaluation") {
  auto z = evaluate_imaginary(0.0, ModulusParam(0.5));
  CHECK(std::fabs(z.sn_im) < 1e-14);
  CHECK(z.cn == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(z.dn == doctest::Approx(1.0).epsilon(1e-13));

  // Small-argument series: sn(iy, m)/i = y + (1+m) y^3/6 + O(y^5).
  for (double m : {0.2, 0.6}) {
    double y = 1e-4;
    auto s = evaluate_imaginary(y, ModulusParam(m));
    CHECK(std::fabs(s.sn_im - (y + (1.0 + m) * y * y * y / 6.0)) < 1e-16);
  }

  // sn(u, m) sn(u + iK', m) = 1/sqrt(m) through the addition theorems.
  for (double m : {0.2, 0.5, 0.8}) {
    double Kp = elliptic_K(1.0 - m);
    for (double u : {0.31, 0.9, 1.7, 2.3}) {
      auto a = jacobi(u, ModulusParam(m));
      auto b = jacobi_complex(u, Kp, ModulusParam(m));
      std::complex<double> prod = a.sn * b.sn;
      CHECK(std::abs(prod - std::complex<double>(1.0 / std::sqrt(m), 0.0)) <
            1e-9);
    }
  }
}

TEST_CASE("jacobi_complex reduces to the real and imaginary paths") {
  for (double m : {0.3, 0.7}) {
    auto r = jacobi_complex(0.8, 0.0, ModulusParam(m));
    auto rr = jacobi(0.8, ModulusParam(m));
    CHECK(std::abs(r.sn - std::complex<double>(rr.sn)) < 1e-12);
    CHECK(std::abs(r.cn - std::complex<double>(rr.cn)) < 1e-12);
    CHECK(std::abs(r.dn - std::complex<double>(rr.dn)) < 1e-12);
    auto i = jacobi_complex(0.0, 0.6, ModulusParam(m));
    auto ii = evaluate_imaginary(0.6, ModulusParam(m));
    CHECK(std::abs(i.sn - std::complex<double>(0.0, ii.sn_im)) < 1e-11);
    CHECK(std::abs(i.cn - std::complex<double>(ii.cn)) < 1e-11);
    CHECK(std::abs(i.dn - std::complex<double>(ii.dn)) < 1e-11);
  }
}
