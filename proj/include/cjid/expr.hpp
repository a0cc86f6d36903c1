#ifndef CJID_EXPR_HPP
#define CJID_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cjid {

/// Lattice function kinds.  Plain s/c/d live on the 2K/p lattice,
/// tilde ts/tc/td on the 4K/p lattice.
enum class FuncKind { S, C, D, TS, TC, TD };

bool is_tilde(FuncKind k);
const char* func_name(FuncKind k);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One AST node.  Identities are two Nodes (lhs, rhs); coefficient
/// arithmetic and lattice monomials share the same node type, with
/// structural rules (e.g. no functions under sqrt or in a denominator)
/// enforced at validation time.
struct Node {
  enum class Kind { Sum, Prod, Div, Pow, Sqrt, Num, Sym, Func, Cyc };
  Kind kind;

  std::vector<NodePtr> kids;  // Sum/Prod children; Div {num, den}; Pow/Sqrt/Cyc {child}
  std::vector<int> signs;     // Sum only, +1/-1 per child
  long long num = 0;          // Num
  char sym = 0;               // Sym: one of m q t A B C
  FuncKind func = FuncKind::S;
  int index = 0;              // Func, 1-based
  int expo = 0;               // Pow
  bool alternating = false;   // Cyc
};

NodePtr num_node(long long v);
NodePtr sym_node(char s);
NodePtr func_node(FuncKind k, int index);
NodePtr sum_node(std::vector<NodePtr> kids, std::vector<int> signs);
NodePtr prod_node(std::vector<NodePtr> kids);
NodePtr div_node(NodePtr num, NodePtr den);
NodePtr pow_node(NodePtr base, int expo);
NodePtr sqrt_node(NodePtr arg);
NodePtr cyc_node(NodePtr body, bool alternating);

bool equal(const NodePtr& a, const NodePtr& b);

/// Renders a node back into DSL text; parse(render(x)) is structurally
/// equal to x.
std::string render(const NodePtr& n);

bool is_zero(const NodePtr& n);
bool contains_func(const NodePtr& n);
void collect_syms(const NodePtr& n, std::set<char>& out);
void collect_funcs(const NodePtr& n, std::set<FuncKind>& out);
int max_index(const NodePtr& n);

class DegreeMismatchError : public std::runtime_error {
 public:
  explicit DegreeMismatchError(const std::string& what)
      : std::runtime_error(what) {}
};

/// All monomial degrees the expression can produce.
std::set<int> degree_set(const NodePtr& n);

/// The common degree of all monomials; throws DegreeMismatchError if
/// the expression is not homogeneous.
int rank_of(const NodePtr& n);

/// Shifts every function index by k (1-based, mod p).
NodePtr shift_indices(const NodePtr& n, int k, int p);

/// Replaces every cyc/acyc node by its explicit p-term sum.
NodePtr expand_cyclic_node(const NodePtr& n, int p);

/// Flattens nested sums/products, folds numeric literals, drops zero
/// terms and unit factors.
NodePtr simplify(const NodePtr& n);

/// Lattice spacing declared for an identity: Half = 2K/p, Full = 4K/p.
enum class Spacing { Half, Full };

struct IdentitySpec;
using IdentitySpecPtr = std::shared_ptr<const IdentitySpec>;

struct IdentitySpec {
  std::string name;  // unique within a catalog, e.g. "E24.2"
  std::string eq;    // equation label, e.g. "E24"
  int p = 0;
  NodePtr lhs;
  NodePtr rhs;
  int rank = 0;
  Spacing spacing = Spacing::Half;
  std::map<char, NodePtr> constants_known;  // closed forms over m, q, t
  std::set<char> to_fit;                    // unknowns with no closed form

  // Set by imaginary translation: the lattice functions are evaluated on
  // the imaginary lattice u + 2i(i-1)K'/p and coefficient symbols at
  // modulus 1-m; `base` holds the untranslated spec.
  bool imaginary = false;
  IdentitySpecPtr base;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Fills in rank, spacing and to_fit, and checks indices, sign parity,
/// spacing consistency and the rank/degree structure.
void validate(IdentitySpec& spec);

IdentitySpec expand_cyclic(const IdentitySpec& spec);

/// DSL text for the identity (without directives).
std::string render_identity(const IdentitySpec& spec);

/// Full DSL statement block (@p/@eq/@const directives plus the identity).
std::string render_spec(const IdentitySpec& spec);

}  // namespace cjid

#endif  // CJID_EXPR_HPP
