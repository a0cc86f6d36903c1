#ifndef CJID_ELLIPTIC_HPP
#define CJID_ELLIPTIC_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace cjid {

/// Raised when an elliptic evaluation cannot be completed (divergent
/// integral, AGM non-convergence, internal consistency failure).
class EllipticError : public std::runtime_error {
 public:
  explicit EllipticError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an evaluation lands too close to a pole of the function.
class PoleError : public EllipticError {
 public:
  explicit PoleError(const std::string& what) : EllipticError(what) {}
};

/// Elliptic modulus parameter, restricted to [0, 1].
class ModulusParam {
 public:
  explicit ModulusParam(double m) : m_(m) {
    if (!(m >= 0.0 && m <= 1.0))
      throw std::domain_error("modulus parameter m must lie in [0, 1]");
  }
  double value() const { return m_; }

 private:
  double m_;
};

/// Values of (sn, cn, dn) at one point.
struct EllipticTriple {
  double sn;
  double cn;
  double dn;
};

/// Quarter periods K(m) and K'(m) = K(1-m).
/// Kprime is +infinity at m = 0 (K(1) diverges); callers that need a
/// finite K' must check before use.
struct QuarterPeriod {
  double K;
  double Kprime;
};

/// The lattice constants q = dn(2K/3, m) and t = dn(K/2, m) = (1-m)^{1/4}.
struct SpecialValues {
  double q;
  double t;
};

/// (sn', cn', dn') at one point.
struct TripleDeriv {
  double dsn;
  double dcn;
  double ddn;
};

/// Values at a purely imaginary argument i*y.  sn(iy, m) is purely
/// imaginary, so only its imaginary part is stored; cn and dn are real.
struct ImaginaryTriple {
  double sn_im;
  double cn;
  double dn;
};

/// Values at a general complex argument.
struct ComplexTriple {
  std::complex<double> sn;
  std::complex<double> cn;
  std::complex<double> dn;
};

/// Extended-precision variants.  The identity engine evaluates lattice
/// polynomials in long double: several catalog constants blow up like
/// 1/(1-q^2) or 1/m near the endpoints of the m grid, and the residual
/// contracts leave no headroom at double precision there.
struct EllipticTripleL {
  long double sn;
  long double cn;
  long double dn;
};
struct SpecialValuesL {
  long double q;
  long double t;
};

long double elliptic_K_ld(double m);
EllipticTripleL jacobi_ld(long double x, ModulusParam m);
SpecialValuesL special_values_ld(ModulusParam m);

/// Complete elliptic integral of the first kind by AGM iteration.
/// Throws EllipticError for m >= 1.
double elliptic_K(double m);

/// Both quarter periods.  Throws EllipticError at m = 1 (K diverges);
/// at m = 0, Kprime is set to +infinity.
QuarterPeriod complete_K(ModulusParam m);

/// sn, cn, dn at (x, m) via the descending Landen (AGM) backward
/// recursion; exact closed forms at m = 0 and m = 1.
EllipticTriple jacobi(double x, ModulusParam m);

/// q = dn(2K/3, m) and t = dn(K/2, m), cross-checked against the
/// closed form t = (1-m)^{1/4}.  Requires m < 1.
SpecialValues special_values(ModulusParam m);

/// dn(u+v) from the addition theorem.
double dn_addition(double u, double v, ModulusParam m);

/// (sn', cn', dn') = (cn dn, -sn dn, -m sn cn).
TripleDeriv derivative_triple(double x, ModulusParam m);

/// sn, cn, dn at the purely imaginary argument i*y.
/// Throws PoleError when |cn(y, 1-m)| < 1e-9.
ImaginaryTriple evaluate_imaginary(double y, ModulusParam m);

/// sn, cn, dn at re + i*im, composed from the real and imaginary
/// evaluations through the addition theorems.
ComplexTriple jacobi_complex(double re, double im, ModulusParam m);

}  // namespace cjid

#endif  // CJID_ELLIPTIC_HPP
