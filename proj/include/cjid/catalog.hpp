#ifndef CJID_CATALOG_HPP
#define CJID_CATALOG_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cjid/expr.hpp"

namespace cjid {

class CatalogError : public std::runtime_error {
 public:
  explicit CatalogError(const std::string& what) : std::runtime_error(what) {}
};

/// An identity family parameterised by the lattice size p.
struct FamilySpec {
  enum class Parity { Any, Even, Odd };
  std::string eq;
  std::string description;
  Parity parity = Parity::Any;
  int min_p = 2;
  std::function<std::vector<IdentitySpec>(int)> instantiate;
};

/// One catalog line: either a list of concrete identities sharing an
/// equation label, or a family.
struct CatalogEntry {
  std::string eq;
  int table = 0;  // 1..3, or 0 for the worked examples outside the tables
  std::vector<IdentitySpec> specs;
  std::optional<FamilySpec> family;
  std::string note;
};

/// The full identity catalog, parsed once from the embedded data files.
const std::vector<CatalogEntry>& load_catalog();

/// The entry with the given equation label, or null.
const CatalogEntry* find_entry(const std::string& eq);

/// Concrete identities of a family at lattice size p.  Checks the parity
/// and minimum-p constraints; includes substitution variants where the
/// family has them.
std::vector<IdentitySpec> instantiate_family(const FamilySpec& family, int p);

/// The substitution variants of an entry at lattice size p (the forms
/// obtained by swapping which shifted functions play each role), not
/// including the base identities.  Empty for entries without variants.
std::vector<IdentitySpec> pair_variants(const CatalogEntry& entry, int p);

/// All concrete identities selected by equation label, optionally pinned
/// to one p.  Families without an explicit p are instantiated for every
/// admissible p up to pmax.
std::vector<IdentitySpec> select_eq(const std::string& eq,
                                    std::optional<int> p, int pmax = 10);

/// All concrete identities of one table (see CatalogEntry::table).
std::vector<IdentitySpec> select_table(int table, std::optional<int> p,
                                       int pmax = 10);

/// Fitted-constant lockfile: one "name m value..." line per (identity, m).
using Lockfile = std::map<std::string, std::map<double, std::map<char, double>>>;

Lockfile read_lockfile(const std::string& path);
void write_lockfile(const std::string& path, const Lockfile& lock);

}  // namespace cjid

#endif  // CJID_CATALOG_HPP
