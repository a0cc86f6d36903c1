#ifndef CJID_ENGINE_HPP
#define CJID_ENGINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cjid/elliptic.hpp"
#include "cjid/expr.hpp"

namespace cjid {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Verification sample grid.  x samples are x_offset + j*period/x_count
/// with the period taken from the lattice spacing (2K or 4K).
struct SampleGrid {
  std::vector<double> m_values;
  int x_count = 32;
  double x_offset = 0.2971215073;

  static SampleGrid defaults();
  static std::vector<double> default_m_values();
};

constexpr double kDefaultTolerance = 1e-9;       // residual, absolute
constexpr double kConstantMatchTolerance = 1e-8; // closed form, relative

/// Evaluates an expression at one (x, m) point on the real lattice.
/// All unknowns appearing in the expression must be assigned.
double evaluate(const NodePtr& e, double x, ModulusParam m, int p,
                const std::map<char, double>& assignment = {});

/// Per-m least-squares fit of the unknown constants of one identity.
struct FitRecord {
  double m = 0;
  std::map<char, double> values;
  std::map<char, double> sigma;  // estimated numerical uncertainty
  double ls_residual = 0;   // max |lhs - rhs| at the fitted values
  double condition = 0;     // singular-value ratio of the design matrix
  bool rank_deficient = false;  // condition above 1e10: min-norm solution
  std::optional<double> x0_value;  // single-unknown x = 0 extraction
};

struct FitResult {
  std::vector<char> unknowns;
  std::vector<FitRecord> records;  // ordered as grid.m_values
};

FitResult fit_constants(const IdentitySpec& spec, const SampleGrid& grid);

/// Verification outcome for one identity over a grid.
struct MRecord {
  double m = 0;
  std::map<char, double> constants;  // assignment used
  bool constants_fitted = false;
  double max_residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string error;  // non-empty when evaluation failed at this m
};

struct VerificationReport {
  std::string name;
  std::string eq;
  int p = 0;
  std::vector<MRecord> records;
  bool pass = false;
};

VerificationReport verify(const IdentitySpec& spec, const SampleGrid& grid,
                          double tol = kDefaultTolerance);

/// d/dx of both sides: a rank r+1 identity.
IdentitySpec differentiate(const IdentitySpec& spec);

/// The imaginary-period translation: m -> 1-m plus the rewrite of every
/// lattice function onto arguments spaced by i2K'/p.  Applying it to an
/// already-translated spec returns the stored real-lattice base.
IdentitySpec imaginary_translate(const IdentitySpec& spec);

/// Strips a coefficient monomial shared by every lhs term (dividing the
/// rhs accordingly).  Display-level helper for derived identities.
IdentitySpec normalize_common_coefficient(const IdentitySpec& spec);

/// Value of a known closed-form constant at modulus m.
double closed_form_value(const NodePtr& closed, double m);

}  // namespace cjid

#endif  // CJID_ENGINE_HPP
