// cjid: verify, fit, derive, translate and browse the identity catalog.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cjid/catalog.hpp"
#include "cjid/engine.hpp"
#include "cjid/parser.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::vector<std::string> files;
  std::string eq;
  int table = -1;
  std::string family;
  std::optional<int> p;
  int pmax = 10;
  std::string m_grid;
  int x_count = 32;
  double tol = cjid::kDefaultTolerance;
  std::string format = "text";
  std::string lockfile;
  bool update_lock = false;
};

cjid::SampleGrid make_grid(const Options& opt) {
  cjid::SampleGrid grid = cjid::SampleGrid::defaults();
  grid.x_count = opt.x_count;
  if (!opt.m_grid.empty()) {
    grid.m_values.clear();
    std::istringstream ss(opt.m_grid);
    std::string item;
    while (std::getline(ss, item, ',')) grid.m_values.push_back(std::stod(item));
    if (grid.m_values.empty())
      throw CLI::ValidationError("--m-grid", "empty modulus list");
  }
  return grid;
}

std::vector<cjid::IdentitySpec> resolve(const Options& opt) {
  std::vector<cjid::IdentitySpec> specs;
  for (const auto& path : opt.files) {
    std::ifstream in(path);
    if (!in) throw cjid::CatalogError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto parsed = cjid::parse(buf.str());
    specs.insert(specs.end(), parsed.begin(), parsed.end());
  }
  if (!opt.eq.empty()) {
    auto got = cjid::select_eq(opt.eq, opt.p, opt.pmax);
    specs.insert(specs.end(), got.begin(), got.end());
  }
  if (opt.table >= 0) {
    auto got = cjid::select_table(opt.table, opt.p, opt.pmax);
    specs.insert(specs.end(), got.begin(), got.end());
  }
  if (!opt.family.empty()) {
    const cjid::CatalogEntry* e = cjid::find_entry(opt.family);
    if (!e || !e->family)
      throw cjid::CatalogError(opt.family + " is not a family entry");
    if (!opt.p)
      throw cjid::CatalogError("--family requires --p");
    auto got = cjid::instantiate_family(*e->family, *opt.p);
    specs.insert(specs.end(), got.begin(), got.end());
  }
  if (specs.empty())
    throw cjid::CatalogError("selectors resolve to no identity");
  return specs;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json constants_json(const std::map<char, double>& constants) {
  json c = json::object();
  for (const auto& [sym, value] : constants) c[std::string(1, sym)] = value;
  return c;
}

void print_record(const Options& opt, const cjid::VerificationReport& rep,
                  const cjid::MRecord& r) {
  if (opt.format == "jsonl") {
    json line{{"name", rep.name},
              {"eq", rep.eq},
              {"p", rep.p},
              {"m", r.m},
              {"residual", r.max_residual},
              {"constants", constants_json(r.constants)},
              {"verdict", r.error.empty() ? (r.pass ? "pass" : "fail")
                                          : "error"}};
    if (!r.error.empty()) line["error"] = r.error;
    std::printf("%s\n", line.dump().c_str());
  } else if (!r.error.empty()) {
    std::printf("%-28s m=%-8s ERROR %s\n", rep.name.c_str(), fmt(r.m).c_str(),
                r.error.c_str());
  } else {
    std::string consts;
    for (const auto& [sym, value] : r.constants)
      consts += std::string(1, ' ') + sym + "=" + fmt(value);
    std::printf("%-28s m=%-8s residual=%-12s %s%s\n", rep.name.c_str(),
                fmt(r.m).c_str(), fmt(r.max_residual).c_str(),
                r.pass ? "pass" : "FAIL", consts.c_str());
  }
}

int verify_specs(const Options& opt, const std::vector<cjid::IdentitySpec>& specs) {
  cjid::SampleGrid grid = make_grid(opt);
  bool all = true;
  for (const auto& spec : specs) {
    auto rep = cjid::verify(spec, grid, opt.tol);
    for (const auto& r : rep.records) print_record(opt, rep, r);
    all = all && rep.pass;
  }
  return all ? 0 : 1;
}

int cmd_verify(const Options& opt) { return verify_specs(opt, resolve(opt)); }

int cmd_fit(const Options& opt) {
  cjid::SampleGrid grid = make_grid(opt);
  cjid::Lockfile lock, fresh;
  bool have_lock = false;
  if (!opt.lockfile.empty()) {
    std::ifstream probe(opt.lockfile);
    if (probe) {
      lock = cjid::read_lockfile(opt.lockfile);
      have_lock = !opt.update_lock;
      if (opt.update_lock) fresh = lock;  // merge into the existing file
    } else if (!opt.update_lock) {
      throw cjid::CatalogError("cannot open lockfile " + opt.lockfile);
    }
  }
  bool all = true;
  for (auto spec : resolve(opt)) {
    // Refit everything, known constants included, so closed forms are
    // cross-checked rather than assumed.
    cjid::IdentitySpec refit = spec;
    for (const auto& [sym, closed] : spec.constants_known)
      refit.to_fit.insert(sym);
    refit.constants_known.clear();
    if (refit.to_fit.empty()) {
      if (opt.format != "jsonl")
        std::printf("%-28s has no constants to fit\n", spec.name.c_str());
      continue;
    }
    auto fit = cjid::fit_constants(refit, grid);
    for (const auto& r : fit.records) {
      double mag = 1.0;
      for (const auto& [sym, value] : r.values) mag += std::fabs(value);
      bool ok = r.ls_residual <=
                std::max(opt.tol, std::min(mag * spec.p * 1e-18, 1e-6));
      std::string status;
      for (char sym : fit.unknowns) {
        double got = r.values.at(sym);
        auto known = spec.constants_known.find(sym);
        if (known != spec.constants_known.end()) {
          double want = cjid::closed_form_value(known->second, r.m);
          double tol = std::max(cjid::kConstantMatchTolerance *
                                    std::max(1.0, std::fabs(want)),
                                3.0 * r.sigma.at(sym));
          bool match = std::fabs(got - want) <= tol;
          ok = ok && match;
          status += std::string(1, ' ') + sym + "=" + fmt(got) +
                    (match ? " (matches " : " (EXPECTED ") + fmt(want) + ")";
        } else {
          status += std::string(1, ' ') + sym + "=" + fmt(got);
        }
        if (have_lock) {
          auto it = lock.find(spec.name);
          if (it != lock.end()) {
            auto im = it->second.find(r.m);
            if (im != it->second.end() && im->second.count(sym)) {
              double locked = im->second.at(sym);
              double drift = std::fabs(got - locked);
              if (drift > std::max(1e-9, 3.0 * r.sigma.at(sym))) {
                ok = false;
                status += " (lock drift from " + fmt(locked) + ")";
              }
            }
          }
        }
        if (spec.to_fit.count(sym)) fresh[spec.name][r.m][sym] = got;
      }
      all = all && ok;
      if (opt.format == "jsonl") {
        json line{{"name", spec.name}, {"eq", spec.eq},
                  {"p", spec.p},       {"m", r.m},
                  {"residual", r.ls_residual},
                  {"constants", constants_json(r.values)},
                  {"verdict", ok ? "pass" : "fail"}};
        std::printf("%s\n", line.dump().c_str());
      } else {
        std::printf("%-28s m=%-8s residual=%-12s %s%s\n", spec.name.c_str(),
                    fmt(r.m).c_str(), fmt(r.ls_residual).c_str(),
                    ok ? "pass" : "FAIL", status.c_str());
      }
    }
  }
  if (!opt.lockfile.empty() && opt.update_lock)
    cjid::write_lockfile(opt.lockfile, fresh);
  return all ? 0 : 1;
}

int cmd_derive(const Options& opt) {
  std::vector<cjid::IdentitySpec> derived;
  for (const auto& spec : resolve(opt)) {
    auto d = cjid::normalize_common_coefficient(cjid::differentiate(spec));
    if (opt.format != "jsonl") std::printf("%s", cjid::render_spec(d).c_str());
    derived.push_back(std::move(d));
  }
  return verify_specs(opt, derived);
}

int cmd_translate(const Options& opt) {
  std::vector<cjid::IdentitySpec> translated;
  for (const auto& spec : resolve(opt)) {
    auto t = cjid::imaginary_translate(spec);
    if (opt.format != "jsonl") {
      std::printf("# %s: arguments shift by 2(i-1)K'/p on the imaginary "
                  "axis, coefficients at modulus 1-m\n",
                  t.name.c_str());
      std::printf("%s", cjid::render_spec(*t.base).c_str());
    }
    translated.push_back(std::move(t));
  }
  return verify_specs(opt, translated);
}

int cmd_list(const Options& opt) {
  auto describe = [&](const cjid::IdentitySpec& s) {
    if (opt.format == "jsonl") {
      std::string known, fit;
      for (const auto& [sym, closed] : s.constants_known)
        known += std::string(1, sym);
      for (char sym : s.to_fit) fit += std::string(1, sym);
      json line{{"name", s.name},
                {"eq", s.eq},
                {"p", s.p},
                {"rank", s.rank},
                {"spacing", s.spacing == cjid::Spacing::Full ? "full" : "half"},
                {"constants_known", known},
                {"constants_to_fit", fit}};
      std::printf("%s\n", line.dump().c_str());
    } else {
      std::string consts;
      for (const auto& [sym, closed] : s.constants_known)
        consts += std::string(1, ' ') + sym + "=" + cjid::render(closed);
      for (char sym : s.to_fit) consts += std::string(1, ' ') + sym + "=?";
      std::printf("%-28s p=%-3d rank=%-2d %-5s%s\n", s.name.c_str(), s.p,
                  s.rank, s.spacing == cjid::Spacing::Full ? "full" : "half",
                  consts.c_str());
    }
  };
  bool selectors = !opt.files.empty() || !opt.eq.empty() || opt.table >= 0 ||
                   !opt.family.empty();
  if (selectors) {
    for (const auto& s : resolve(opt)) describe(s);
    return 0;
  }
  for (const auto& e : cjid::load_catalog()) {
    if (e.family) {
      std::string parity =
          e.family->parity == cjid::FamilySpec::Parity::Even
              ? "even p"
              : e.family->parity == cjid::FamilySpec::Parity::Odd ? "odd p"
                                                                  : "any p";
      std::printf("%-6s table %d  family (%s >= %d): %s%s%s\n", e.eq.c_str(),
                  e.table, parity.c_str(), e.family->min_p,
                  e.family->description.c_str(), e.note.empty() ? "" : "; ",
                  e.note.c_str());
    }
    for (const auto& s : e.specs) describe(s);
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& opt, bool with_grid = true) {
  cmd->add_option("files", opt.files, "identity files in the DSL format")
      ->check(CLI::ExistingFile);
  cmd->add_option("--eq", opt.eq, "catalog equation label, e.g. E23");
  cmd->add_option("--table", opt.table, "catalog table number (0-3)");
  cmd->add_option("--family", opt.family, "family label to instantiate");
  auto* p = cmd->add_option("--p", "lattice point count");
  p->check(CLI::Range(2, 64))->each([&opt](const std::string& v) {
    opt.p = std::stoi(v);
  });
  cmd->add_option("--pmax", opt.pmax, "family instantiation ceiling")
      ->check(CLI::Range(2, 64));
  if (with_grid) {
    cmd->add_option("--m-grid", opt.m_grid,
                    "comma-separated modulus values, e.g. 0.25,0.5");
    cmd->add_option("--x-count", opt.x_count, "samples per period")
        ->check(CLI::Range(8, 4096))
        ->envname("CJID_XCOUNT");
    cmd->add_option("--tol", opt.tol, "residual tolerance")
        ->envname("CJID_TOL");
  }
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "jsonl"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic identities of Jacobi elliptic functions"};
  app.require_subcommand(1);
  Options opt;

  auto* verify = app.add_subcommand("verify", "check identities over a grid");
  add_common(verify, opt);
  auto* fit = app.add_subcommand("fit", "fit unknown constants per modulus");
  add_common(fit, opt);
  fit->add_option("--lockfile", opt.lockfile,
                  "compare fitted values against a lockfile");
  fit->add_flag("--update-lock", opt.update_lock,
                "rewrite the lockfile with the fitted values");
  auto* derive = app.add_subcommand("derive", "differentiate identities");
  add_common(derive, opt);
  auto* translate =
      app.add_subcommand("translate", "imaginary-period translation");
  add_common(translate, opt);
  auto* list = app.add_subcommand("list", "browse the catalog");
  add_common(list, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(opt);
    if (fit->parsed()) return cmd_fit(opt);
    if (derive->parsed()) return cmd_derive(opt);
    if (translate->parsed()) return cmd_translate(opt);
    return cmd_list(opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
