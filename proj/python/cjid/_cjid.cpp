#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cjid/catalog.hpp"
#include "cjid/engine.hpp"
#include "cjid/parser.hpp"

namespace py = pybind11;
using namespace cjid;

namespace {

SampleGrid build_grid(const std::optional<std::vector<double>>& m_values,
                      int x_count) {
  SampleGrid grid = SampleGrid::defaults();
  if (m_values) grid.m_values = *m_values;
  grid.x_count = x_count;
  return grid;
}

py::dict report_dict(const VerificationReport& rep) {
  py::dict out;
  out["name"] = rep.name;
  out["eq"] = rep.eq;
  out["p"] = rep.p;
  out["pass"] = rep.pass;
  py::list records;
  for (const auto& r : rep.records) {
    py::dict rec;
    rec["m"] = r.m;
    rec["residual"] = r.max_residual;
    rec["tolerance"] = r.tolerance;
    rec["pass"] = r.pass;
    py::dict constants;
    for (const auto& [sym, value] : r.constants)
      constants[py::str(std::string(1, sym))] = value;
    rec["constants"] = constants;
    if (!r.error.empty()) rec["error"] = r.error;
    records.append(rec);
  }
  out["records"] = records;
  return out;
}

py::dict fit_dict(const FitResult& fit) {
  py::dict out;
  py::str unknowns;
  std::string syms;
  for (char u : fit.unknowns) syms += u;
  out["unknowns"] = syms;
  py::list records;
  for (const auto& r : fit.records) {
    py::dict rec;
    rec["m"] = r.m;
    py::dict values, sigma;
    for (const auto& [sym, value] : r.values)
      values[py::str(std::string(1, sym))] = value;
    for (const auto& [sym, value] : r.sigma)
      sigma[py::str(std::string(1, sym))] = value;
    rec["values"] = values;
    rec["sigma"] = sigma;
    rec["residual"] = r.ls_residual;
    rec["condition"] = r.condition;
    rec["rank_deficient"] = r.rank_deficient;
    records.append(rec);
  }
  out["records"] = records;
  return out;
}

}  // namespace

PYBIND11_MODULE(_cjid, mod) {
  mod.doc() = "cyclic identities of Jacobi elliptic functions";

  py::register_exception<EllipticError>(mod, "EllipticError");
  py::register_exception<ParseError>(mod, "DslError");
  py::register_exception<EvalError>(mod, "EvalError");
  py::register_exception<CatalogError>(mod, "CatalogError");

  mod.def(
      "complete_K",
      [](double m) {
        auto qp = complete_K(ModulusParam(m));
        return py::make_tuple(qp.K, qp.Kprime);
      },
      py::arg("m"), "quarter periods (K, K') by AGM iteration");

  mod.def(
      "jacobi",
      [](double x, double m) {
        auto t = jacobi(x, ModulusParam(m));
        return py::make_tuple(t.sn, t.cn, t.dn);
      },
      py::arg("x"), py::arg("m"), "(sn, cn, dn) at (x, m)");

  mod.def(
      "special_values",
      [](double m) {
        auto sv = special_values(ModulusParam(m));
        return py::make_tuple(sv.q, sv.t);
      },
      py::arg("m"), "(q, t) = (dn(2K/3), dn(K/2))");

  mod.def(
      "dn_addition",
      [](double u, double v, double m) {
        return dn_addition(u, v, ModulusParam(m));
      },
      py::arg("u"), py::arg("v"), py::arg("m"));

  mod.def(
      "derivative_triple",
      [](double x, double m) {
        auto d = derivative_triple(x, ModulusParam(m));
        return py::make_tuple(d.dsn, d.dcn, d.ddn);
      },
      py::arg("x"), py::arg("m"), "(sn', cn', dn') at (x, m)");

  mod.def(
      "jacobi_complex",
      [](double re, double im, double m) {
        auto t = jacobi_complex(re, im, ModulusParam(m));
        return py::make_tuple(t.sn, t.cn, t.dn);
      },
      py::arg("re"), py::arg("im"), py::arg("m"));

  py::class_<IdentitySpec>(mod, "Identity")
      .def_readonly("name", &IdentitySpec::name)
      .def_readonly("eq", &IdentitySpec::eq)
      .def_readonly("p", &IdentitySpec::p)
      .def_readonly("rank", &IdentitySpec::rank)
      .def_readonly("imaginary", &IdentitySpec::imaginary)
      .def_property_readonly(
          "spacing",
          [](const IdentitySpec& s) {
            return s.spacing == Spacing::Full ? "full" : "half";
          })
      .def_property_readonly(
          "to_fit",
          [](const IdentitySpec& s) {
            std::string out;
            for (char c : s.to_fit) out += c;
            return out;
          })
      .def_property_readonly(
          "known_constants",
          [](const IdentitySpec& s) {
            py::dict out;
            for (const auto& [sym, closed] : s.constants_known)
              out[py::str(std::string(1, sym))] = render(closed);
            return out;
          })
      .def("render", &render_spec)
      .def("__repr__", [](const IdentitySpec& s) {
        return "<Identity " + s.name + ">";
      });

  mod.def("parse", [](const std::string& source) { return parse(source); },
          py::arg("source"), "parse DSL text into identities");

  mod.def(
      "select_eq",
      [](const std::string& eq, std::optional<int> p, int pmax) {
        return select_eq(eq, p, pmax);
      },
      py::arg("eq"), py::arg("p") = std::nullopt, py::arg("pmax") = 10);

  mod.def(
      "select_table",
      [](int table, std::optional<int> p, int pmax) {
        return select_table(table, p, pmax);
      },
      py::arg("table"), py::arg("p") = std::nullopt, py::arg("pmax") = 10);

  mod.def(
      "evaluate",
      [](const std::string& expr, double x, double m, int p,
         const std::map<std::string, double>& assignment) {
        std::map<char, double> assign;
        for (const auto& [k, v] : assignment) {
          if (k.size() != 1) throw EvalError("constant names are one letter");
          assign[k[0]] = v;
        }
        return evaluate(parse_expression(expr), x, ModulusParam(m), p, assign);
      },
      py::arg("expr"), py::arg("x"), py::arg("m"), py::arg("p"),
      py::arg("assignment") = std::map<std::string, double>{},
      "evaluate a lattice expression at one (x, m) point");

  mod.def(
      "verify",
      [](const IdentitySpec& spec,
         const std::optional<std::vector<double>>& m_values, int x_count,
         double tol) {
        return report_dict(verify(spec, build_grid(m_values, x_count), tol));
      },
      py::arg("identity"), py::arg("m_values") = std::nullopt,
      py::arg("x_count") = 32, py::arg("tol") = kDefaultTolerance);

  mod.def(
      "fit_constants",
      [](const IdentitySpec& spec,
         const std::optional<std::vector<double>>& m_values, int x_count) {
        return fit_dict(fit_constants(spec, build_grid(m_values, x_count)));
      },
      py::arg("identity"), py::arg("m_values") = std::nullopt,
      py::arg("x_count") = 32);

  mod.def("differentiate", &differentiate, py::arg("identity"),
          "rank r+1 identity via the derivative rules");
  mod.def("normalize_common_coefficient", &normalize_common_coefficient,
          py::arg("identity"));
  mod.def("imaginary_translate", &imaginary_translate, py::arg("identity"),
          "move the identity onto the imaginary-period lattice (involution)");
}
