#include "cjid/catalog.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "cjid/parser.hpp"

namespace cjid::catalog_data {
extern const char* const table1;
extern const char* const table2;
extern const char* const table3;
extern const char* const extras;
}  // namespace cjid::catalog_data

namespace cjid {

namespace {

using Parity = FamilySpec::Parity;

std::string istr(int v) { return std::to_string(v); }

// Incremental DSL source builder for family instantiation.
class Dsl {
 public:
  explicit Dsl(int p, const std::string& eq) {
    out_ << "@p " << p << "\n@eq " << eq << "\n";
  }
  void add(const std::string& name, const std::string& line) {
    out_ << "@name \"" << name << "\"\n" << line << "\n";
  }
  void add_const(char sym, const std::string& closed) {
    out_ << "@const " << sym << " " << closed << "\n";
  }
  std::vector<IdentitySpec> parse_all() const { return parse(out_.str()); }

 private:
  std::ostringstream out_;
};

std::string func_ref(const std::string& f, int index) {
  return f + "[" + istr(index) + "]";
}

// d_1 d_{j_1} ... d_{j_{r-1}} as a product string; tuple includes index 1.
std::string chain(const std::string& f, const std::vector<int>& tuple) {
  std::string s;
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += "*";
    s += func_ref(f, tuple[i]);
  }
  return s;
}

std::string tag(const std::string& eq, int p, const std::string& extra) {
  std::string s = eq + "[p=" + istr(p);
  if (!extra.empty()) s += "," + extra;
  return s + "]";
}

void require_parity(const FamilySpec& f, int p) {
  if (p < f.min_p)
    throw CatalogError(f.eq + " requires p >= " + istr(f.min_p));
  if (f.parity == Parity::Even && p % 2 != 0)
    throw CatalogError(f.eq + " requires even p");
  if (f.parity == Parity::Odd && p % 2 == 0)
    throw CatalogError(f.eq + " requires odd p");
}

// --- Rank-2 families -------------------------------------------------

std::vector<IdentitySpec> gen_E8(int p) {
  Dsl d(p, "E8");
  d.add(tag("E8", p, ""), "cyc(d[1]*d[2]) == A");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E11(int p) {
  Dsl d(p, "E11");
  d.add(tag("E11", p, ""),
        "cyc(s[1]*c[1]*(" + func_ref("d", 2) + "+" + func_ref("d", p) +
            ")) == 0");
  return d.parse_all();
}

// d_1...d_r chains (consecutive indices); tilde versions for odd p.
std::vector<IdentitySpec> gen_chains(int p, const std::string& eq,
                                     bool odd_rank) {
  Dsl d(p, eq);
  for (int r = odd_rank ? 3 : 2; r <= p; r += 2) {
    std::vector<int> tuple(r);
    for (int i = 0; i < r; ++i) tuple[i] = i + 1;
    std::vector<std::string> funcs{"d"};
    if (p % 2 == 1) {
      funcs.push_back("ts");
      funcs.push_back("tc");
    }
    for (const auto& f : funcs) {
      // The full-length tilde chains pair a 1/m^2 constant with an O(m^2)
      // lattice sum; past p = 3 no working precision verifies them, so
      // they are left out of the generated set.
      if (f != "d" && r == p && p > 3) continue;
      std::string extra = "r=" + istr(r) + (f == "d" ? "" : "," + f);
      std::string rhs = odd_rank ? "B*cyc(" + func_ref(f, 1) + ")" : "A";
      d.add(tag(eq, p, extra), "cyc(" + chain(f, tuple) + ") == " + rhs);
    }
  }
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E19(int p) {
  Dsl d(p, "E19");
  for (int n = 2; n <= p / 2 + 1; ++n)
    d.add(tag("E19", p, "n=" + istr(n)),
          "cyc(d[1]*" + func_ref("d", n) + ") == A");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E20(int p) {
  Dsl d(p, "E20");
  for (int j1 = 2; j1 < p; ++j1)
    for (int j2 = j1 + 1; j2 <= p; ++j2)
      d.add(tag("E20", p, "j=" + istr(j1) + "," + istr(j2)),
            "cyc(" + chain("d", {1, j1, j2}) + ") == B*cyc(d[1])");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_pairwise(int p, const std::string& eq) {
  Dsl d(p, eq);
  for (int i = 1; i <= p / 2; ++i) {
    d.add_const('A', "sqrt(1-m)");
    d.add(tag(eq, p, "i=" + istr(i)),
          func_ref("d", i) + "*" + func_ref("d", i + p / 2) + " == A");
  }
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E27(int p) {
  Dsl d(p, "E27");
  for (int n = 2; n <= p / 2; ++n)
    d.add(tag("E27", p, "n=" + istr(n)),
          "cyc(d[1]*" + func_ref("d", n) + ") == A");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E29(int p) {
  Dsl d(p, "E29");
  for (int n = 2; n <= (p + 1) / 2; ++n)
    for (const std::string f : {"d", "tc", "ts"})
      d.add(tag("E29", p, "n=" + istr(n) + (f == "d" ? "" : "," + f)),
            "cyc(" + func_ref(f, 1) + "*" + func_ref(f, n) + ") == A");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E30(int p) {
  Dsl d(p, "E30");
  for (int n = 2; n <= (p + 1) / 2; ++n) {
    int n2 = p + 2 - n;
    auto gap = [&](const std::string& f) {
      return "(" + func_ref(f, n) + "+" + func_ref(f, n2) + ")";
    };
    std::string suffix = "n=" + istr(n);
    d.add(tag("E30", p, suffix + ",tc.td"), "cyc(tc[1]*" + gap("td") + ") == 0");
    d.add(tag("E30", p, suffix + ",ts.td"), "cyc(ts[1]*" + gap("td") + ") == 0");
    d.add(tag("E30", p, suffix + ",tc.ts"), "cyc(tc[1]*" + gap("ts") + ") == 0");
  }
  return d.parse_all();
}

// --- Rank-3 families -------------------------------------------------

std::vector<IdentitySpec> gen_E56(int p) {
  Dsl d(p, "E56");
  for (int n = 2; n <= p / 2; ++n)
    d.add(tag("E56", p, "n=" + istr(n)),
          "cyc(c[1]*s[1]*(" + func_ref("d", n) + "+" + func_ref("d", p + 2 - n) +
              ")) == 0");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E57(int p) {
  Dsl d(p, "E57");
  for (int i = 1; i <= p / 2; ++i) {
    int j = i + p / 2;
    d.add(tag("E57", p, "i=" + istr(i)),
          func_ref("c", i) + "*" + func_ref("s", i) + "*" + func_ref("d", j) +
              " + " + func_ref("c", j) + "*" + func_ref("s", j) + "*" +
              func_ref("d", i) + " == 0");
  }
  return d.parse_all();
}

void add_gap_square(Dsl& d, const std::string& eq, int p, int n,
                    const std::string& f, bool alternating,
                    const std::string& known_const) {
  int n2 = p + 2 - n;
  std::string op = alternating ? "acyc" : "cyc";
  std::string lhs = op + "(" + func_ref(f, 1) + "^2*(" + func_ref(f, n) + "+" +
                    func_ref(f, n2) + "))";
  std::string rhs = "A*" + op + "(" + func_ref(f, 1) + ")";
  std::string suffix = "n=" + istr(n);
  if (f != "d") suffix += "," + f;
  if (alternating) suffix += ",alt";
  if (!known_const.empty()) d.add_const('A', known_const);
  d.add(tag(eq, p, suffix), lhs + " == " + rhs);
}

std::vector<IdentitySpec> gen_E58(int p) {
  Dsl d(p, "E58");
  for (int n = 2; n <= p / 2; ++n) {
    add_gap_square(d, "E58", p, n, "d", false, "");
    add_gap_square(d, "E58", p, n, "d", true, "");
  }
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E59(int p) {
  Dsl d(p, "E59");
  int c = p / 2 + 1;
  d.add_const('A', "sqrt(1-m)");
  d.add(tag("E59", p, "center"),
        "cyc(d[1]^2*" + func_ref("d", c) + ") == A*cyc(d[1])");
  d.add_const('A', "sqrt(1-m)");
  d.add(tag("E59", p, "center,alt"),
        "acyc(d[1]^2*" + func_ref("d", c) + ") == A*acyc(d[1])");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E60(int p) {
  Dsl d(p, "E60");
  for (int j = 2; j < p; ++j)
    for (int k = j + 1; k <= p; ++k) {
      std::string suffix = "j=" + istr(j) + "," + istr(k);
      d.add(tag("E60", p, suffix),
            "cyc(" + chain("d", {1, j, k}) + ") == A*cyc(d[1])");
      // Alternating versions only for reflection-free index patterns
      // (the pattern {0, a, 2a}); lopsided patterns do not close.
      if (k - 1 == 2 * (j - 1))
        d.add(tag("E60", p, suffix + ",alt"),
              "acyc(" + chain("d", {1, j, k}) + ") == A*acyc(d[1])");
    }
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E61(int p) {
  Dsl d(p, "E61");
  for (const std::string f : {"d", "tc", "ts"})
    for (int j1 = 2; j1 < p; ++j1)
      for (int j2 = j1 + 1; j2 <= p; ++j2)
        d.add(tag("E61", p,
                  "j=" + istr(j1) + "," + istr(j2) + (f == "d" ? "" : "," + f)),
              "cyc(" + chain(f, {1, j1, j2}) + ") == A*cyc(" + func_ref(f, 1) +
                  ")");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E62(int p) {
  Dsl d(p, "E62");
  for (int n = 2; n <= (p + 1) / 2; ++n) {
    int n2 = p + 2 - n;
    d.add(tag("E62", p, "n=" + istr(n)),
          "cyc(tc[1]*(" + func_ref("ts", n) + "*" + func_ref("td", n2) + "+" +
              func_ref("ts", n2) + "*" + func_ref("td", n) + ")) == 0");
  }
  return d.parse_all();
}

const std::vector<std::pair<std::string, std::string>> kPairSubs = {
    {"tc", "ts"}, {"ts", "td"}, {"ts", "tc"}, {"td", "tc"}, {"td", "ts"}};

enum class Pick { Base, Variants, All };

bool want_base(Pick w) { return w != Pick::Variants; }
bool want_variants(Pick w) { return w != Pick::Base; }

// f_1 g_n g_{p+2-n} + c.p. = A (f_1 + c.p.)
std::vector<IdentitySpec> gen_E63(int p, Pick which) {
  Dsl d(p, "E63");
  auto emit = [&](const std::string& f, const std::string& g, bool base) {
    for (int n = 2; n <= (p + 1) / 2; ++n) {
      int n2 = p + 2 - n;
      std::string suffix = "n=" + istr(n);
      if (!base) suffix += "," + f + "." + g;
      d.add(tag("E63", p, suffix),
            "cyc(" + func_ref(f, 1) + "*" + func_ref(g, n) + "*" +
                func_ref(g, n2) + ") == A*cyc(" + func_ref(f, 1) + ")");
    }
  };
  if (want_base(which)) emit("tc", "td", true);
  if (want_variants(which))
    for (const auto& [f, g] : kPairSubs) emit(f, g, false);
  return d.parse_all();
}

// g_1 (g_n f_n + g_{p+2-n} f_{p+2-n}) + c.p. = A (f_1 + c.p.)
std::vector<IdentitySpec> gen_E64(int p, Pick which) {
  Dsl d(p, "E64");
  auto emit = [&](const std::string& f, const std::string& g, bool base) {
    for (int n = 2; n <= (p + 1) / 2; ++n) {
      int n2 = p + 2 - n;
      std::string suffix = "n=" + istr(n);
      if (!base) suffix += "," + f + "." + g;
      d.add(tag("E64", p, suffix),
            "cyc(" + func_ref(g, 1) + "*(" + func_ref(g, n) + "*" +
                func_ref(f, n) + "+" + func_ref(g, n2) + "*" + func_ref(f, n2) +
                ")) == A*cyc(" + func_ref(f, 1) + ")");
    }
  };
  if (want_base(which)) emit("tc", "td", true);
  if (want_variants(which))
    for (const auto& [f, g] : kPairSubs) emit(f, g, false);
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E65(int p, Pick which) {
  Dsl d(p, "E65");
  std::vector<std::string> funcs;
  if (want_base(which)) funcs.push_back("d");
  if (want_variants(which)) {
    funcs.push_back("tc");
    funcs.push_back("ts");
  }
  for (const auto& f : funcs)
    for (int n = 2; n <= (p + 1) / 2; ++n)
      add_gap_square(d, "E65", p, n, f, false, "");
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E66(int p, Pick which) {
  Dsl d(p, "E66");
  std::vector<std::array<std::string, 3>> triples;
  if (want_base(which)) triples.push_back({"c", "s", "d"});
  if (want_variants(which)) {
    triples.push_back({"tc", "td", "ts"});
    triples.push_back({"td", "ts", "tc"});
  }
  for (const auto& tr : triples)
    for (int n = 2; n <= (p + 1) / 2; ++n) {
      int n2 = p + 2 - n;
      std::string suffix = "n=" + istr(n);
      if (tr[0] != "c") suffix += "," + tr[0] + "." + tr[1] + "." + tr[2];
      d.add(tag("E66", p, suffix),
            "cyc(" + func_ref(tr[0], 1) + "*" + func_ref(tr[1], 1) + "*(" +
                func_ref(tr[2], n) + "+" + func_ref(tr[2], n2) + ")) == 0");
    }
  return d.parse_all();
}

// --- Rank >= 4 families ----------------------------------------------

std::vector<IdentitySpec> gen_E78(int p) {
  Dsl d(p, "E78");
  if (p % 2 == 0) {
    std::string lhs = "m^" + istr(p);
    for (int i = 1; i <= p; ++i) lhs += "*" + func_ref("s", i) + "^2";
    d.add(tag("E78", p, "squares"), lhs + " == A*cyc(s[1]^2) + B");
  }
  // Non-consecutive chains, complementing the consecutive tuples of the
  // plain chain families: skip one index, and a stride-2 tuple when it
  // fits.
  std::vector<std::string> funcs{"d"};
  if (p % 2 == 1) {
    funcs.push_back("ts");
    funcs.push_back("tc");
  }
  for (int r = 2; r <= std::min(p - 1, 5); ++r) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> skip{1};
    for (int i = 2; i <= r - 1; ++i) skip.push_back(i);
    skip.push_back(r + 1);
    tuples.push_back(skip);
    if (2 * r - 1 <= p && r > 2) {
      std::vector<int> stride;
      for (int i = 0; i < r; ++i) stride.push_back(2 * i + 1);
      tuples.push_back(stride);
    }
    for (const auto& tuple : tuples) {
      std::string ix;
      for (size_t i = 1; i < tuple.size(); ++i)
        ix += (i > 1 ? "." : "") + istr(tuple[i]);
      for (const auto& f : funcs) {
        std::string rhs = r % 2 == 0 ? std::string("A")
                                     : "B*cyc(" + func_ref(f, 1) + ")";
        d.add(tag("E78", p, "r=" + istr(r) + ",j=" + ix +
                               (f == "d" ? "" : "," + f)),
              "cyc(" + chain(f, tuple) + ") == " + rhs);
      }
    }
  }
  return d.parse_all();
}

std::vector<IdentitySpec> gen_E79(int p) {
  Dsl d(p, "E79");
  for (int r = 2; r <= 7; ++r) {
    std::string head =
        r == 2 ? "d[1]" : "d[1]^" + istr(r - 1);
    std::string lhs = "cyc(" + head + "*(" + func_ref("d", 2) + "+" +
                      func_ref("d", p) + "))";
    std::string rhs;
    char sym = 'A';
    // Blocks of degree r-2, r-4, ..., down to degree 1 (r odd) or the
    // trailing constant (r even).
    for (int k = r - 2; k >= 0; k -= 2) {
      if (!rhs.empty()) rhs += " + ";
      if (k == 0)
        rhs += std::string(1, sym);
      else if (k == 1)
        rhs += std::string(1, sym) + "*cyc(d[1])";
      else
        rhs += std::string(1, sym) + "*cyc(d[1]^" + istr(k) + ")";
      ++sym;
    }
    d.add(tag("E79", p, "r=" + istr(r)), lhs + " == " + rhs);
  }
  return d.parse_all();
}

// --- Catalog assembly ------------------------------------------------

FamilySpec family(const std::string& eq, const std::string& desc,
                  Parity parity, int min_p,
                  std::function<std::vector<IdentitySpec>(int)> fn) {
  FamilySpec f;
  f.eq = eq;
  f.description = desc;
  f.parity = parity;
  f.min_p = min_p;
  f.instantiate = std::move(fn);
  return f;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;

  auto add_concrete = [&](int table, const char* source) {
    for (auto& spec : parse(source)) {
      auto it = std::find_if(entries.begin(), entries.end(), [&](auto& e) {
        return e.eq == spec.eq;
      });
      if (it == entries.end()) {
        entries.push_back({spec.eq, table, {}, std::nullopt, ""});
        it = entries.end() - 1;
      }
      it->specs.push_back(std::move(spec));
    }
  };
  auto add_family = [&](int table, FamilySpec f, const std::string& note = "") {
    entries.push_back({f.eq, table, {}, std::move(f), note});
  };

  add_concrete(0, catalog_data::extras);
  add_family(0, family("E8", "product of neighbours summed cyclically",
                       Parity::Any, 2, gen_E8));
  add_family(0, family("E11", "derivative of the neighbour-product sum",
                       Parity::Any, 2, gen_E11));
  add_family(0, family("E13", "consecutive chains of even length",
                       Parity::Any, 2,
                       [](int p) { return gen_chains(p, "E13", false); }));
  add_family(0, family("E14", "consecutive chains of odd length",
                       Parity::Any, 3,
                       [](int p) { return gen_chains(p, "E14", true); }));
  add_family(0, family("E19", "gap products summed cyclically", Parity::Any, 2,
                       gen_E19));
  add_family(0, family("E20", "index-pair triple products", Parity::Any, 3,
                       gen_E20));
  add_family(0, family("E22", "antipodal products, all constant", Parity::Even,
                       2, [](int p) { return gen_pairwise(p, "E22"); }));

  add_concrete(1, catalog_data::table1);
  add_family(1, family("E27", "even-p gap products", Parity::Even, 4, gen_E27));
  add_family(1, family("E28", "even-p antipodal products", Parity::Even, 2,
                       [](int p) { return gen_pairwise(p, "E28"); }));
  add_family(1, family("E29", "odd-p gap products, three function kinds",
                       Parity::Odd, 3, gen_E29));
  add_family(1, family("E30", "odd-p vanishing mixed sums", Parity::Odd, 3,
                       gen_E30));

  add_concrete(2, catalog_data::table2);
  add_family(2, family("E56", "even-p vanishing c s gap sums", Parity::Even, 4,
                       gen_E56));
  add_family(2, family("E57", "even-p antipodal c s d pairs", Parity::Even, 2,
                       gen_E57));
  add_family(2, family("E58", "even-p squared gap sums", Parity::Even, 4,
                       gen_E58));
  add_family(2, family("E59", "even-p central squared terms", Parity::Even, 4,
                       gen_E59));
  add_family(2, family("E60", "even-p index-pair triples, both signs",
                       Parity::Even, 4, gen_E60));
  add_family(2, family("E61", "odd-p index-pair triples, three kinds",
                       Parity::Odd, 3, gen_E61));
  add_family(2, family("E62", "odd-p vanishing mixed gap sums", Parity::Odd, 3,
                       gen_E62));
  add_family(2, family("E63", "odd-p paired-product gap sums", Parity::Odd, 3,
                       [](int p) { return gen_E63(p, Pick::All); }),
             "substitution variants included");
  add_family(2, family("E64", "odd-p mixed paired-product sums", Parity::Odd, 3,
                       [](int p) { return gen_E64(p, Pick::All); }),
             "substitution variants included");
  add_family(2, family("E65", "odd-p squared gap sums", Parity::Odd, 3,
                       [](int p) { return gen_E65(p, Pick::All); }),
             "substitution variants included");
  add_family(2, family("E66", "odd-p vanishing squared gap sums", Parity::Odd,
                       3, [](int p) { return gen_E66(p, Pick::All); }),
             "substitution variants included");

  add_concrete(3, catalog_data::table3);
  add_family(3, family("E78", "general chains and the all-squares product",
                       Parity::Any, 3, gen_E78));
  add_family(3, family("E79", "descending power chain", Parity::Any, 3,
                       gen_E79));

  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& load_catalog() {
  static const std::vector<CatalogEntry> catalog = build_catalog();
  return catalog;
}

const CatalogEntry* find_entry(const std::string& eq) {
  for (const auto& e : load_catalog())
    if (e.eq == eq) return &e;
  return nullptr;
}

std::vector<IdentitySpec> instantiate_family(const FamilySpec& f, int p) {
  require_parity(f, p);
  return f.instantiate(p);
}

std::vector<IdentitySpec> pair_variants(const CatalogEntry& entry, int p) {
  if (entry.eq == "E63") return gen_E63(p, Pick::Variants);
  if (entry.eq == "E64") return gen_E64(p, Pick::Variants);
  if (entry.eq == "E65") return gen_E65(p, Pick::Variants);
  if (entry.eq == "E66") return gen_E66(p, Pick::Variants);
  throw CatalogError(entry.eq + " has no substitution variants");
}

std::vector<IdentitySpec> select_eq(const std::string& eq,
                                    std::optional<int> p, int pmax) {
  const CatalogEntry* e = find_entry(eq);
  if (!e) throw CatalogError("unknown equation label " + eq);
  std::vector<IdentitySpec> out;
  if (!e->specs.empty()) {
    for (const auto& s : e->specs)
      if (!p || s.p == *p) out.push_back(s);
    if (!out.empty()) return out;
    if (!e->family)
      throw CatalogError(eq + " has no identity at p = " + istr(p ? *p : 0));
  }
  if (e->family) {
    const FamilySpec& f = *e->family;
    if (p) {
      auto got = instantiate_family(f, *p);
      out.insert(out.end(), got.begin(), got.end());
    } else {
      int step = f.parity == Parity::Any ? 1 : 2;
      int start = f.min_p;
      if (f.parity == Parity::Odd && start % 2 == 0) ++start;
      if (f.parity == Parity::Even && start % 2 == 1) ++start;
      for (int pp = start; pp <= pmax; pp += step) {
        auto got = instantiate_family(f, pp);
        out.insert(out.end(), got.begin(), got.end());
      }
    }
  }
  return out;
}

std::vector<IdentitySpec> select_table(int table, std::optional<int> p,
                                       int pmax) {
  std::vector<IdentitySpec> out;
  bool any = false;
  for (const auto& e : load_catalog()) {
    if (e.table != table) continue;
    any = true;
    for (const auto& s : e.specs)
      if (!p || s.p == *p) out.push_back(s);
    if (e.family && (!p || (*p >= e.family->min_p &&
                            (e.family->parity == Parity::Any ||
                             (*p % 2 == 0) ==
                                 (e.family->parity == Parity::Even))))) {
      if (p) {
        auto got = instantiate_family(*e.family, *p);
        out.insert(out.end(), got.begin(), got.end());
      }
    }
  }
  if (!any) throw CatalogError("no table " + istr(table));
  return out;
}

Lockfile read_lockfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open lockfile " + path);
  Lockfile lock;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, sym;
    double m, value;
    if (!(ls >> name >> m >> sym >> value) || sym.size() != 1)
      throw CatalogError("malformed lockfile line: " + line);
    lock[name][m][sym[0]] = value;
  }
  return lock;
}

void write_lockfile(const std::string& path, const Lockfile& lock) {
  std::ofstream out(path);
  if (!out) throw CatalogError("cannot write lockfile " + path);
  out.precision(17);
  for (const auto& [name, per_m] : lock)
    for (const auto& [m, consts] : per_m)
      for (const auto& [sym, value] : consts)
        out << name << " " << m << " " << sym << " " << value << "\n";
  if (!out) throw CatalogError("failed writing lockfile " + path);
}

}  // namespace cjid
