#include "cjid/elliptic.hpp"

#include <cmath>
#include <limits>

namespace cjid {

namespace {

constexpr int kMaxAgmIter = 40;
constexpr long double kAgmTol = 1e-15L;

// AGM mean of (1, sqrt(1-m)), in extended precision.
long double agm_1_sqrt1m(long double m) {
  long double a = 1.0L;
  long double b = std::sqrt(1.0L - m);
  for (int i = 0; i < kMaxAgmIter; ++i) {
    if (std::fabs(a - b) <= kAgmTol * a) return a;
    long double an = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  throw EllipticError("AGM iteration did not converge");
}

EllipticTripleL jacobi_m0(long double x) {
  return {std::sin(x), std::cos(x), 1.0L};
}

EllipticTripleL jacobi_m1(long double x) {
  long double sech = 1.0L / std::cosh(x);
  return {std::tanh(x), sech, sech};
}

// Descending Landen backward recursion (Abramowitz & Stegun 16.4).
EllipticTripleL jacobi_agm(long double x, double m) {
  long double lm = static_cast<long double>(m);
  long double a = 1.0L;
  long double b = std::sqrt(1.0L - lm);
  long double c = std::sqrt(lm);
  long double as[kMaxAgmIter + 1];
  long double cs[kMaxAgmIter + 1];
  int n = 0;
  while (std::fabs(a - b) > kAgmTol * a) {
    as[n] = a;
    cs[n] = c;
    long double an = 0.5L * (a + b);
    c = 0.5L * (a - b);
    b = std::sqrt(a * b);
    a = an;
    if (++n > kMaxAgmIter) throw EllipticError("AGM iteration did not converge");
  }
  as[n] = a;
  cs[n] = c;
  long double phi = std::ldexp(a * x, n);
  for (int i = n; i >= 1; --i)
    phi = 0.5L * (phi + std::asin(cs[i] / as[i] * std::sin(phi)));
  long double sn = std::sin(phi);
  long double cn = std::cos(phi);
  // dn^2 = 1 - m sn^2 rewritten to avoid cancellation near m = 1.
  long double dn = std::sqrt(cn * cn + (1.0L - lm) * sn * sn);
  return {sn, cn, dn};
}

}  // namespace

long double elliptic_K_ld(double m) {
  if (m >= 1.0) throw EllipticError("K(m) diverges as m -> 1");
  if (m < 0.0) throw std::domain_error("m out of range");
  const long double pi = 3.14159265358979323846264338327950288L;
  return pi / (2.0L * agm_1_sqrt1m(static_cast<long double>(m)));
}

EllipticTripleL jacobi_ld(long double x, ModulusParam m) {
  if (!std::isfinite(x)) throw std::domain_error("argument x must be finite");
  double mv = m.value();
  if (mv == 0.0) return jacobi_m0(x);
  if (mv == 1.0) return jacobi_m1(x);
  // Reduce modulo the full period 4K to keep the dyadic phase small.
  long double K = elliptic_K_ld(mv);
  long double xr = std::remainder(x, 4.0L * K);
  return jacobi_agm(xr, mv);
}

SpecialValuesL special_values_ld(ModulusParam m) {
  double mv = m.value();
  if (mv >= 1.0) throw EllipticError("special values undefined at m = 1");
  if (mv == 0.0) return {1.0L, 1.0L};
  long double K = elliptic_K_ld(mv);
  long double q = jacobi_ld(2.0L * K / 3.0L, m).dn;
  long double t_dn = jacobi_ld(0.5L * K, m).dn;
  long double t_closed = std::pow(1.0L - static_cast<long double>(mv), 0.25L);
  if (std::fabs(t_dn - t_closed) > 1e-11L)
    throw EllipticError("inconsistent t: dn(K/2) and (1-m)^{1/4} disagree");
  return {q, t_closed};
}

double elliptic_K(double m) { return static_cast<double>(elliptic_K_ld(m)); }

QuarterPeriod complete_K(ModulusParam m) {
  double mv = m.value();
  if (mv == 1.0) throw EllipticError("K(1) diverges");
  double kp = mv > 0.0 ? elliptic_K(1.0 - mv)
                       : std::numeric_limits<double>::infinity();
  return {elliptic_K(mv), kp};
}

EllipticTriple jacobi(double x, ModulusParam m) {
  EllipticTripleL e = jacobi_ld(static_cast<long double>(x), m);
  return {static_cast<double>(e.sn), static_cast<double>(e.cn),
          static_cast<double>(e.dn)};
}

SpecialValues special_values(ModulusParam m) {
  SpecialValuesL sv = special_values_ld(m);
  return {static_cast<double>(sv.q), static_cast<double>(sv.t)};
}

double dn_addition(double u, double v, ModulusParam m) {
  double mv = m.value();
  EllipticTriple a = jacobi(u, m);
  EllipticTriple b = jacobi(v, m);
  double den = 1.0 - mv * a.sn * a.sn * b.sn * b.sn;
  return (a.dn * b.dn - mv * a.sn * a.cn * b.sn * b.cn) / den;
}

TripleDeriv derivative_triple(double x, ModulusParam m) {
  EllipticTriple e = jacobi(x, m);
  return {e.cn * e.dn, -e.sn * e.dn, -m.value() * e.sn * e.cn};
}

ImaginaryTriple evaluate_imaginary(double y, ModulusParam m) {
  // sn(iy,m) = i sn(y,1-m)/cn(y,1-m), cn(iy,m) = 1/cn(y,1-m),
  // dn(iy,m) = dn(y,1-m)/cn(y,1-m).
  EllipticTriple e = jacobi(y, ModulusParam(1.0 - m.value()));
  if (std::fabs(e.cn) < 1e-9)
    throw PoleError("imaginary-axis evaluation too close to a pole");
  return {e.sn / e.cn, 1.0 / e.cn, e.dn / e.cn};
}

ComplexTriple jacobi_complex(double re, double im, ModulusParam m) {
  using cd = std::complex<double>;
  EllipticTriple a = jacobi(re, m);
  EllipticTriple b = jacobi(im, ModulusParam(1.0 - m.value()));
  // Addition formulas with sn(iy) = i sn/cn, cn(iy) = 1/cn,
  // dn(iy) = dn/cn at modulus 1-m, multiplied through by cn^2 so they
  // stay finite across the poles at y = K' where that cn vanishes.
  double eps = b.cn;
  double den = eps * eps + m.value() * a.sn * a.sn * b.sn * b.sn;
  if (std::fabs(den) < 1e-12)
    throw PoleError("complex evaluation at a lattice pole");
  cd i(0.0, 1.0);
  cd sa(a.sn), ca(a.cn), da(a.dn);
  cd sn = (sa * b.dn + i * b.sn * ca * da * eps) / den;
  cd cn = (ca * eps - i * sa * da * b.sn * b.dn) / den;
  cd dn = (da * b.dn * eps - i * m.value() * sa * ca * b.sn) / den;
  return {sn, cn, dn};
}

}  // namespace cjid
