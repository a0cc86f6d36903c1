#include "cjid/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace cjid {

SampleGrid SampleGrid::defaults() {
  SampleGrid g;
  g.m_values = default_m_values();
  return g;
}

std::vector<double> SampleGrid::default_m_values() {
  std::vector<double> m{1e-8};
  for (int i = 1; i <= 19; ++i) m.push_back(0.05 * i);
  m.push_back(1.0 - 1e-6);
  return m;
}

namespace {

// Lattice values on the real axis at one (x, m).  Extended precision:
// some identities pair O(1/m) coefficients with O(m) lattice sums, and
// the residual tolerance leaves no room for double rounding there.
class RealCtx {
 public:
  using Scalar = long double;

  RealCtx(double x, double m, int p, const std::map<char, double>* assign)
      : x_(x), m_(m), p_(p), assign_(assign), plain_(p), tilde_(p) {
    K_ = elliptic_K_ld(m);
  }

  int p() const { return p_; }
  const std::map<char, double>* assignment() const { return assign_; }

  Scalar sym_value(char s) const {
    if (s == 'm') return static_cast<long double>(m_);
    if (!sv_) sv_ = special_values_ld(ModulusParam(m_));
    return s == 'q' ? sv_->q : sv_->t;
  }

  Scalar func_value(FuncKind k, int index) const {
    bool tilde = is_tilde(k);
    auto& cache = tilde ? tilde_ : plain_;
    auto& slot = cache[index - 1];
    if (!slot) {
      long double step = (tilde ? 4.0L : 2.0L) * K_ / p_;
      slot = jacobi_ld(x_ + (index - 1) * step, ModulusParam(m_));
    }
    switch (k) {
      case FuncKind::S: case FuncKind::TS: return slot->sn;
      case FuncKind::C: case FuncKind::TC: return slot->cn;
      default: return slot->dn;
    }
  }

  static double magnitude(Scalar v) { return static_cast<double>(std::fabs(v)); }
  static Scalar sqrt_value(Scalar v) {
    if (v < 0) throw EvalError("sqrt of a negative coefficient");
    return std::sqrt(v);
  }

 private:
  long double x_;
  double m_;
  int p_;
  const std::map<char, double>* assign_;
  long double K_;
  mutable std::optional<SpecialValuesL> sv_;
  mutable std::vector<std::optional<EllipticTripleL>> plain_, tilde_;
};

// Lattice values for a translated identity: functions of
// u_i = u + 2i(i-1)K'/p at modulus m, coefficients at modulus 1-m.
class ImagCtx {
 public:
  using Scalar = std::complex<double>;

  ImagCtx(double u, double m, int p, const std::map<char, double>* assign)
      : u_(u), m_(m), p_(p), assign_(assign), cache_(p) {
    Kp_ = elliptic_K(1.0 - m);
    root_ = std::sqrt(1.0 - m);
  }

  int p() const { return p_; }
  const std::map<char, double>* assignment() const { return assign_; }

  double sym_value(char s) const {
    if (s == 'm') return 1.0 - m_;
    if (!sv_) sv_ = special_values(ModulusParam(1.0 - m_));
    return s == 'q' ? sv_->q : sv_->t;
  }

  Scalar func_value(FuncKind k, int index) const {
    if (is_tilde(k))
      throw EvalError("translated identities use plain lattice functions");
    auto& slot = cache_[index - 1];
    if (!slot)
      slot = jacobi_complex(u_, (index - 1) * 2.0 * Kp_ / p_, ModulusParam(m_));
    if (std::abs(slot->sn) < 1e-9)
      throw PoleError("translated lattice point too close to an sn zero");
    switch (k) {
      case FuncKind::S:
        return Scalar(0.0, 1.0) * slot->cn / (root_ * slot->sn);
      case FuncKind::C:
        return slot->dn / (root_ * slot->sn);
      default:
        return Scalar(1.0) / slot->sn;
    }
  }

  static double magnitude(Scalar v) { return std::abs(v); }
  static Scalar sqrt_value(Scalar v) { return std::sqrt(v); }

 private:
  double u_, m_;
  int p_;
  const std::map<char, double>* assign_;
  double Kp_;
  double root_;
  mutable std::optional<SpecialValues> sv_;
  mutable std::vector<std::optional<ComplexTriple>> cache_;
};

// Coefficient-only context (closed forms).
class CoefCtx {
 public:
  using Scalar = long double;
  CoefCtx(double m, const std::map<char, double>* assign)
      : m_(m), assign_(assign) {}
  int p() const { return 1; }
  const std::map<char, double>* assignment() const { return assign_; }
  Scalar sym_value(char s) const {
    if (s == 'm') return static_cast<long double>(m_);
    if (!sv_) sv_ = special_values_ld(ModulusParam(m_));
    return s == 'q' ? sv_->q : sv_->t;
  }
  Scalar func_value(FuncKind, int) const {
    throw EvalError("lattice function in a coefficient expression");
  }
  static double magnitude(Scalar v) { return static_cast<double>(std::fabs(v)); }
  static Scalar sqrt_value(Scalar v) {
    if (v < 0) throw EvalError("sqrt of a negative coefficient");
    return std::sqrt(v);
  }

 private:
  double m_;
  const std::map<char, double>* assign_;
  mutable std::optional<SpecialValuesL> sv_;
};

template <class Ctx>
typename Ctx::Scalar eval_node(const NodePtr& n, const Ctx& ctx, int shift) {
  using S = typename Ctx::Scalar;
  switch (n->kind) {
    case Node::Kind::Num:
      return S(static_cast<double>(n->num));
    case Node::Kind::Sym: {
      char s = n->sym;
      if (s == 'm' || s == 'q' || s == 't') return S(ctx.sym_value(s));
      const auto* assign = ctx.assignment();
      auto it = assign ? assign->find(s) : std::map<char, double>::const_iterator{};
      if (!assign || it == assign->end())
        throw EvalError(std::string("unassigned unknown constant ") + s);
      return S(it->second);
    }
    case Node::Kind::Func: {
      int idx = (n->index - 1 + shift) % ctx.p() + 1;
      return ctx.func_value(n->func, idx);
    }
    case Node::Kind::Sum: {
      S acc{};
      for (size_t i = 0; i < n->kids.size(); ++i) {
        S v = eval_node(n->kids[i], ctx, shift);
        acc += n->signs[i] < 0 ? -v : v;
      }
      return acc;
    }
    case Node::Kind::Prod: {
      S acc(1.0);
      for (const auto& k : n->kids) acc *= eval_node(k, ctx, shift);
      return acc;
    }
    case Node::Kind::Div: {
      S den = eval_node(n->kids[1], ctx, shift);
      // Coefficient denominators like (1-q^2)^2 legitimately reach 1e-17
      // near the grid endpoints; only guard against a true zero.
      if (Ctx::magnitude(den) < 1e-300)
        throw EvalError("division by a near-zero coefficient");
      return eval_node(n->kids[0], ctx, shift) / den;
    }
    case Node::Kind::Pow: {
      S b = eval_node(n->kids[0], ctx, shift);
      S acc(1.0);
      for (int i = 0; i < n->expo; ++i) acc *= b;
      return acc;
    }
    case Node::Kind::Sqrt:
      return Ctx::sqrt_value(eval_node(n->kids[0], ctx, shift));
    case Node::Kind::Cyc: {
      S acc{};
      for (int k = 0; k < ctx.p(); ++k) {
        S v = eval_node(n->kids[0], ctx, shift + k);
        acc += (n->alternating && (k % 2)) ? -v : v;
      }
      return acc;
    }
  }
  throw EvalError("unreachable node kind");
}

double sample_period(const IdentitySpec& spec, double m) {
  double K = elliptic_K(m);
  return (spec.spacing == Spacing::Full ? 4.0 : 2.0) * K;
}

// Assignment of all constants for one m: closed forms plus fitted values.
std::map<char, double> build_assignment(const IdentitySpec& spec, double m,
                                        const std::map<char, double>& fitted) {
  std::map<char, double> assign = fitted;
  double coef_m = spec.imaginary ? 1.0 - m : m;
  for (const auto& [sym, closed] : spec.constants_known)
    assign[sym] = closed_form_value(closed, coef_m);
  return assign;
}

// |lhs - rhs| maximised over the x grid, resampling the offset when a
// pole is hit (up to 3 retries).
double max_residual(const IdentitySpec& spec, double m, const SampleGrid& grid,
                    const std::map<char, double>& assign) {
  for (int attempt = 0;; ++attempt) {
    double offset = grid.x_offset + 0.1371 * attempt;
    try {
      double period = spec.imaginary ? 2.0 * elliptic_K(m) : sample_period(spec, m);
      double worst = 0.0;
      for (int j = 0; j < grid.x_count; ++j) {
        double x = offset + j * period / grid.x_count;
        double r;
        if (spec.imaginary) {
          ImagCtx ctx(x, m, spec.p, &assign);
          r = std::abs(eval_node(spec.lhs, ctx, 0) - eval_node(spec.rhs, ctx, 0));
        } else {
          RealCtx ctx(x, m, spec.p, &assign);
          r = std::fabs(eval_node(spec.lhs, ctx, 0) - eval_node(spec.rhs, ctx, 0));
        }
        worst = std::max(worst, r);
      }
      return worst;
    } catch (const PoleError&) {
      if (attempt >= 3) throw;
    }
  }
}

}  // namespace

double evaluate(const NodePtr& e, double x, ModulusParam m, int p,
                const std::map<char, double>& assignment) {
  RealCtx ctx(x, m.value(), p, &assignment);
  return eval_node(e, ctx, 0);
}

double closed_form_value(const NodePtr& closed, double m) {
  CoefCtx ctx(m, nullptr);
  return eval_node(closed, ctx, 0);
}

FitResult fit_constants(const IdentitySpec& spec, const SampleGrid& grid) {
  FitResult result;
  result.unknowns.assign(spec.to_fit.begin(), spec.to_fit.end());
  const int k = static_cast<int>(result.unknowns.size());
  if (k == 0) throw EvalError("identity has no unknown constants to fit");

  const int x_count = std::max(grid.x_count, 4 * k);

  for (double m : grid.m_values) {
    FitRecord rec;
    rec.m = m;
    for (int attempt = 0;; ++attempt) {
      double offset = grid.x_offset + 0.1371 * attempt;
      try {
        double period = spec.imaginary ? 2.0 * elliptic_K(m) : sample_period(spec, m);
        std::map<char, double> zeros = build_assignment(spec, m, {});
        for (char u : result.unknowns) zeros[u] = 0.0;

        const int rows_per_sample = spec.imaginary ? 2 : 1;
        using MatrixXld =
            Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
        using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
        MatrixXld A(x_count * rows_per_sample, k);
        VectorXld b(x_count * rows_per_sample);

        for (int j = 0; j < x_count; ++j) {
          double x = offset + j * period / x_count;
          auto eval_at = [&](const std::map<char, double>& assign)
              -> std::complex<long double> {
            if (spec.imaginary) {
              ImagCtx ctx(x, m, spec.p, &assign);
              return eval_node(spec.lhs, ctx, 0) - eval_node(spec.rhs, ctx, 0);
            }
            RealCtx ctx(x, m, spec.p, &assign);
            return eval_node(spec.lhs, ctx, 0) - eval_node(spec.rhs, ctx, 0);
          };
          std::complex<long double> base = eval_at(zeros);
          b(j * rows_per_sample) = base.real();
          if (rows_per_sample == 2) b(j * rows_per_sample + 1) = base.imag();
          for (int c = 0; c < k; ++c) {
            std::map<char, double> one = zeros;
            one[result.unknowns[c]] = 1.0;
            // (lhs-rhs)|_{u_c=1} - (lhs-rhs)|_0 = -block_c
            std::complex<long double> col = eval_at(one) - base;
            A(j * rows_per_sample, c) = -col.real();
            if (rows_per_sample == 2) A(j * rows_per_sample + 1, c) = -col.imag();
          }
        }

        Eigen::JacobiSVD<MatrixXld> svd(A, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
        long double smax = svd.singularValues()(0);
        long double smin = svd.singularValues()(k - 1);
        rec.condition = smin > 0
                            ? static_cast<double>(smax / smin)
                            : std::numeric_limits<double>::infinity();
        rec.rank_deficient = rec.condition > 1e10;
        // Truncated solve: the x-variation of a lattice power sum decays
        // like nome^p, so multi-block designs go numerically rank
        // deficient at large p.  Keep the minimum-norm solution and flag
        // the record instead of failing.
        svd.setThreshold(Eigen::NumTraits<long double>::dummy_precision());
        VectorXld u = svd.solve(b);
        for (int c = 0; c < k; ++c)
          rec.values[result.unknowns[c]] = static_cast<double>(u(c));

        // First-order uncertainty of the solution: rounding noise in the
        // sampled values (about 1e-18 per entry, amplified by the size of
        // the constants themselves) propagated through the pseudo-inverse.
        {
          long double mag = 1.0L;
          for (int c = 0; c < k; ++c) mag += std::fabs(u(c));
          long double noise =
              mag * 1e-18L * std::sqrt(static_cast<long double>(b.size()));
          long double cutoff = smax * svd.threshold();
          for (int c = 0; c < k; ++c) {
            long double var = 0.0L;
            for (int j = 0; j < k; ++j) {
              long double s = svd.singularValues()(j);
              if (s <= cutoff) continue;
              long double v = svd.matrixV()(c, j) / s;
              var += v * v;
            }
            rec.sigma[result.unknowns[c]] =
                static_cast<double>(noise * std::sqrt(var));
          }
        }

        std::map<char, double> fitted = build_assignment(spec, m, rec.values);
        rec.ls_residual = max_residual(spec, m, grid, fitted);

        // x = 0 extraction cross-check for single-unknown identities.
        if (k == 1 && !spec.imaginary) {
          std::map<char, double> zeros0 = zeros;
          RealCtx ctx0(0.0, m, spec.p, &zeros0);
          double base0 =
              eval_node(spec.lhs, ctx0, 0) - eval_node(spec.rhs, ctx0, 0);
          std::map<char, double> one0 = zeros;
          one0[result.unknowns[0]] = 1.0;
          RealCtx ctx1(0.0, m, spec.p, &one0);
          double block0 = base0 - (eval_node(spec.lhs, ctx1, 0) -
                                   eval_node(spec.rhs, ctx1, 0));
          if (std::fabs(block0) > 1e-6) rec.x0_value = base0 / block0;
        }
        break;
      } catch (const PoleError&) {
        if (attempt >= 3) throw;
      }
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

VerificationReport verify(const IdentitySpec& spec, const SampleGrid& grid,
                          double tol) {
  VerificationReport report;
  report.name = spec.name;
  report.eq = spec.eq;
  report.p = spec.p;

  std::optional<FitResult> fits;
  std::string fit_error;
  if (!spec.to_fit.empty()) {
    try {
      fits = fit_constants(spec, grid);
    } catch (const std::exception& e) {
      fit_error = e.what();
    }
  }

  bool all_pass = true;
  for (size_t i = 0; i < grid.m_values.size(); ++i) {
    MRecord rec;
    rec.m = grid.m_values[i];
    rec.tolerance = tol;
    try {
      if (!fit_error.empty()) throw EvalError(fit_error);
      std::map<char, double> fitted;
      if (fits) {
        fitted = fits->records[i].values;
        rec.constants_fitted = true;
      }
      rec.constants = build_assignment(spec, rec.m, fitted);
      rec.max_residual = max_residual(spec, rec.m, grid, rec.constants);
      // Forward-error floor: a constant of magnitude |c| multiplying a
      // lattice sum carries |c| * eps(long double) of rounding noise per
      // term, so identities with huge constants cannot reach the absolute
      // tolerance.  Widen it by that bound, capped so a genuinely wrong
      // identity still fails.
      double mag = 0.0;
      for (const auto& [sym, v] : rec.constants) mag += std::fabs(v);
      double floor = (1.0 + mag) * spec.p * 1e-18;
      rec.tolerance = std::max(tol, std::min(floor, 1e-6));
      rec.pass = rec.max_residual <= rec.tolerance;
    } catch (const std::exception& e) {
      rec.error = e.what();
      rec.pass = false;
    }
    all_pass = all_pass && rec.pass;
    report.records.push_back(std::move(rec));
  }
  report.pass = all_pass;
  return report;
}

namespace {

NodePtr derivative(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::Num:
    case Node::Kind::Sym:
    case Node::Kind::Sqrt:  // sqrt arguments are coefficient-only
      return num_node(0);
    case Node::Kind::Div:
      return div_node(derivative(n->kids[0]), n->kids[1]);
    case Node::Kind::Sum: {
      std::vector<NodePtr> kids;
      for (const auto& k : n->kids) kids.push_back(derivative(k));
      return sum_node(std::move(kids), n->signs);
    }
    case Node::Kind::Prod: {
      std::vector<NodePtr> terms;
      for (size_t i = 0; i < n->kids.size(); ++i) {
        std::vector<NodePtr> factors = n->kids;
        factors[i] = derivative(n->kids[i]);
        terms.push_back(prod_node(std::move(factors)));
      }
      return sum_node(std::move(terms), std::vector<int>(terms.size(), 1));
    }
    case Node::Kind::Pow: {
      // n * b^(n-1) * b'
      std::vector<NodePtr> factors{num_node(n->expo)};
      if (n->expo > 1) factors.push_back(pow_node(n->kids[0], n->expo - 1));
      factors.push_back(derivative(n->kids[0]));
      return prod_node(std::move(factors));
    }
    case Node::Kind::Cyc:
      return cyc_node(derivative(n->kids[0]), n->alternating);
    case Node::Kind::Func: {
      FuncKind k = n->func;
      bool tilde = is_tilde(k);
      FuncKind s = tilde ? FuncKind::TS : FuncKind::S;
      FuncKind c = tilde ? FuncKind::TC : FuncKind::C;
      FuncKind d = tilde ? FuncKind::TD : FuncKind::D;
      int i = n->index;
      switch (k) {
        case FuncKind::S:
        case FuncKind::TS:
          return prod_node({func_node(c, i), func_node(d, i)});
        case FuncKind::C:
        case FuncKind::TC:
          return prod_node({num_node(-1), func_node(s, i), func_node(d, i)});
        default:
          return prod_node({num_node(-1), sym_node('m'), func_node(s, i),
                            func_node(c, i)});
      }
    }
  }
  return num_node(0);
}

}  // namespace

IdentitySpec differentiate(const IdentitySpec& spec) {
  IdentitySpec out = spec;
  out.lhs = simplify(derivative(spec.lhs));
  out.rhs = simplify(derivative(spec.rhs));
  out.name = spec.name + "'";
  out.eq = spec.eq.empty() ? "" : spec.eq + "'";
  validate(out);
  return out;
}

IdentitySpec imaginary_translate(const IdentitySpec& spec) {
  if (spec.imaginary && spec.base) {
    IdentitySpec back = *spec.base;
    return back;
  }
  if (spec.spacing != Spacing::Half)
    throw EvalError(
        "imaginary translation is defined for plain-lattice identities only");
  IdentitySpec out = spec;
  out.imaginary = true;
  out.base = std::make_shared<const IdentitySpec>(spec);
  out.name = spec.name + "~i";
  return out;
}

namespace {

struct CoefMono {
  long long num = 1;
  std::multiset<char> syms;
  bool operator==(const CoefMono& o) const {
    return num == o.num && syms == o.syms;
  }
  bool trivial() const { return num == 1 && syms.empty(); }
};

// Splits a product term into its scalar-coefficient monomial and the rest.
bool split_term(const NodePtr& term, CoefMono& mono) {
  auto absorb = [&](const NodePtr& f) -> bool {
    if (f->kind == Node::Kind::Num) {
      mono.num *= f->num;
      return true;
    }
    if (f->kind == Node::Kind::Sym) {
      mono.syms.insert(f->sym);
      return true;
    }
    if (f->kind == Node::Kind::Pow && f->kids[0]->kind == Node::Kind::Sym) {
      for (int i = 0; i < f->expo; ++i) mono.syms.insert(f->kids[0]->sym);
      return true;
    }
    return false;
  };
  if (term->kind == Node::Kind::Prod) {
    for (const auto& f : term->kids) absorb(f);
    return true;
  }
  absorb(term);
  return true;
}

void collect_terms(const NodePtr& n, int sign, std::vector<std::pair<NodePtr, int>>& out) {
  if (n->kind == Node::Kind::Sum) {
    for (size_t i = 0; i < n->kids.size(); ++i)
      collect_terms(n->kids[i], sign * n->signs[i], out);
  } else if (n->kind == Node::Kind::Cyc) {
    collect_terms(n->kids[0], sign, out);
  } else {
    out.emplace_back(n, sign);
  }
}

NodePtr strip_coef(const NodePtr& n, const CoefMono& mono);

NodePtr strip_term(const NodePtr& term, const CoefMono& mono) {
  CoefMono remaining = mono;
  std::vector<NodePtr> rest;
  auto strip_factor = [&](const NodePtr& f) -> bool {
    if (f->kind == Node::Kind::Num && remaining.num != 1 &&
        f->num == remaining.num) {
      remaining.num = 1;
      return true;
    }
    if (f->kind == Node::Kind::Sym && remaining.syms.count(f->sym)) {
      remaining.syms.erase(remaining.syms.find(f->sym));
      return true;
    }
    return false;
  };
  if (term->kind == Node::Kind::Prod) {
    for (const auto& f : term->kids)
      if (!strip_factor(f)) rest.push_back(f);
  } else if (!strip_factor(term)) {
    rest.push_back(term);
  }
  if (rest.empty()) return num_node(1);
  if (rest.size() == 1) return rest[0];
  return prod_node(std::move(rest));
}

NodePtr strip_coef(const NodePtr& n, const CoefMono& mono) {
  if (n->kind == Node::Kind::Sum) {
    auto copy = std::make_shared<Node>(*n);
    for (auto& k : copy->kids) k = strip_coef(k, mono);
    return copy;
  }
  if (n->kind == Node::Kind::Cyc)
    return cyc_node(strip_coef(n->kids[0], mono), n->alternating);
  return strip_term(n, mono);
}

}  // namespace

IdentitySpec normalize_common_coefficient(const IdentitySpec& spec) {
  NodePtr lhs = simplify(spec.lhs);
  std::vector<std::pair<NodePtr, int>> terms;
  collect_terms(lhs, 1, terms);
  if (terms.empty()) return spec;

  CoefMono common;
  split_term(terms[0].first, common);
  if (common.trivial()) return spec;
  for (size_t i = 1; i < terms.size(); ++i) {
    CoefMono mono;
    split_term(terms[i].first, mono);
    if (!(mono == common)) return spec;
  }

  IdentitySpec out = spec;
  out.lhs = simplify(strip_coef(lhs, common));
  if (!is_zero(simplify(spec.rhs))) {
    std::vector<NodePtr> coef_factors;
    if (common.num != 1) coef_factors.push_back(num_node(common.num));
    for (char s : common.syms) coef_factors.push_back(sym_node(s));
    NodePtr coef = coef_factors.size() == 1 ? coef_factors[0]
                                            : prod_node(std::move(coef_factors));
    out.rhs = simplify(div_node(spec.rhs, coef));
  } else {
    out.rhs = num_node(0);
  }
  validate(out);
  return out;
}

}  // namespace cjid
