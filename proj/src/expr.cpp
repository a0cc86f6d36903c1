#include "cjid/expr.hpp"

#include <algorithm>
#include <sstream>

namespace cjid {

bool is_tilde(FuncKind k) {
  return k == FuncKind::TS || k == FuncKind::TC || k == FuncKind::TD;
}

const char* func_name(FuncKind k) {
  switch (k) {
    case FuncKind::S: return "s";
    case FuncKind::C: return "c";
    case FuncKind::D: return "d";
    case FuncKind::TS: return "ts";
    case FuncKind::TC: return "tc";
    case FuncKind::TD: return "td";
  }
  return "?";
}

namespace {
std::shared_ptr<Node> make(Node::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}
}  // namespace

NodePtr num_node(long long v) {
  auto n = make(Node::Kind::Num);
  n->num = v;
  return n;
}

NodePtr sym_node(char s) {
  auto n = make(Node::Kind::Sym);
  n->sym = s;
  return n;
}

NodePtr func_node(FuncKind k, int index) {
  auto n = make(Node::Kind::Func);
  n->func = k;
  n->index = index;
  return n;
}

NodePtr sum_node(std::vector<NodePtr> kids, std::vector<int> signs) {
  auto n = make(Node::Kind::Sum);
  n->kids = std::move(kids);
  n->signs = std::move(signs);
  return n;
}

NodePtr prod_node(std::vector<NodePtr> kids) {
  auto n = make(Node::Kind::Prod);
  n->kids = std::move(kids);
  return n;
}

NodePtr div_node(NodePtr num, NodePtr den) {
  auto n = make(Node::Kind::Div);
  n->kids = {std::move(num), std::move(den)};
  return n;
}

NodePtr pow_node(NodePtr base, int expo) {
  auto n = make(Node::Kind::Pow);
  n->kids = {std::move(base)};
  n->expo = expo;
  return n;
}

NodePtr sqrt_node(NodePtr arg) {
  auto n = make(Node::Kind::Sqrt);
  n->kids = {std::move(arg)};
  return n;
}

NodePtr cyc_node(NodePtr body, bool alternating) {
  auto n = make(Node::Kind::Cyc);
  n->kids = {std::move(body)};
  n->alternating = alternating;
  return n;
}

bool equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Kind::Num: return a->num == b->num;
    case Node::Kind::Sym: return a->sym == b->sym;
    case Node::Kind::Func: return a->func == b->func && a->index == b->index;
    default: break;
  }
  if (a->expo != b->expo || a->alternating != b->alternating ||
      a->signs != b->signs || a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

// Precedence for rendering: Sum < Prod/Div < Pow operand.
enum Prec { kSum = 0, kProd = 1, kAtom = 2 };

void render_to(const NodePtr& n, std::ostringstream& out, int context);

void render_wrapped(const NodePtr& n, std::ostringstream& out, int context,
                    int own) {
  if (own < context) {
    out << '(';
    render_to(n, out, kSum);
    out << ')';
  } else {
    render_to(n, out, context);
  }
}

void render_to(const NodePtr& n, std::ostringstream& out, int context) {
  switch (n->kind) {
    case Node::Kind::Num:
      if (n->num < 0 && context > kSum) {
        out << '(' << n->num << ')';
      } else {
        out << n->num;
      }
      break;
    case Node::Kind::Sym:
      out << n->sym;
      break;
    case Node::Kind::Func:
      out << func_name(n->func) << '[' << n->index << ']';
      break;
    case Node::Kind::Sum: {
      if (context > kSum) out << '(';
      for (size_t i = 0; i < n->kids.size(); ++i) {
        if (i == 0) {
          if (n->signs[i] < 0) out << '-';
        } else {
          out << (n->signs[i] < 0 ? " - " : " + ");
        }
        render_to(n->kids[i], out, kProd);
      }
      if (context > kSum) out << ')';
      break;
    }
    case Node::Kind::Prod:
      for (size_t i = 0; i < n->kids.size(); ++i) {
        if (i) out << '*';
        render_wrapped(n->kids[i], out, kProd, n->kids[i]->kind == Node::Kind::Sum ? kSum : kProd);
      }
      break;
    case Node::Kind::Div:
      render_wrapped(n->kids[0], out, kProd,
                     n->kids[0]->kind == Node::Kind::Sum ? kSum : kProd);
      out << '/';
      {
        const NodePtr& den = n->kids[1];
        bool paren = den->kind == Node::Kind::Sum ||
                     den->kind == Node::Kind::Prod ||
                     den->kind == Node::Kind::Div;
        if (paren) out << '(';
        render_to(den, out, paren ? kSum : kAtom);
        if (paren) out << ')';
      }
      break;
    case Node::Kind::Pow: {
      const NodePtr& b = n->kids[0];
      bool paren = b->kind != Node::Kind::Func && b->kind != Node::Kind::Sym &&
                   !(b->kind == Node::Kind::Num && b->num >= 0);
      if (paren) out << '(';
      render_to(b, out, paren ? kSum : kAtom);
      if (paren) out << ')';
      out << '^' << n->expo;
      break;
    }
    case Node::Kind::Sqrt:
      out << "sqrt(";
      render_to(n->kids[0], out, kSum);
      out << ')';
      break;
    case Node::Kind::Cyc:
      out << (n->alternating ? "acyc(" : "cyc(");
      render_to(n->kids[0], out, kSum);
      out << ')';
      break;
  }
}

}  // namespace

std::string render(const NodePtr& n) {
  std::ostringstream out;
  render_to(n, out, kSum);
  return out.str();
}

bool is_zero(const NodePtr& n) {
  return n->kind == Node::Kind::Num && n->num == 0;
}

bool contains_func(const NodePtr& n) {
  if (n->kind == Node::Kind::Func) return true;
  for (const auto& k : n->kids)
    if (contains_func(k)) return true;
  return false;
}

void collect_syms(const NodePtr& n, std::set<char>& out) {
  if (n->kind == Node::Kind::Sym) out.insert(n->sym);
  for (const auto& k : n->kids) collect_syms(k, out);
}

void collect_funcs(const NodePtr& n, std::set<FuncKind>& out) {
  if (n->kind == Node::Kind::Func) out.insert(n->func);
  for (const auto& k : n->kids) collect_funcs(k, out);
}

int max_index(const NodePtr& n) {
  int mi = 0;
  if (n->kind == Node::Kind::Func) mi = n->index;
  for (const auto& k : n->kids) mi = std::max(mi, max_index(k));
  return mi;
}

std::set<int> degree_set(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::Num:
    case Node::Kind::Sym:
      return {0};
    case Node::Kind::Func:
      return {1};
    case Node::Kind::Sqrt:
      if (contains_func(n->kids[0]))
        throw DegreeMismatchError("sqrt of a lattice-function expression");
      return {0};
    case Node::Kind::Div: {
      auto den = degree_set(n->kids[1]);
      if (den != std::set<int>{0})
        throw DegreeMismatchError("division by a lattice-function expression");
      return degree_set(n->kids[0]);
    }
    case Node::Kind::Sum: {
      std::set<int> out;
      for (const auto& k : n->kids) {
        // A literal zero is degree-neutral.
        if (is_zero(k)) continue;
        auto d = degree_set(k);
        out.insert(d.begin(), d.end());
      }
      if (out.empty()) out.insert(0);
      return out;
    }
    case Node::Kind::Prod: {
      std::set<int> out{0};
      for (const auto& k : n->kids) {
        std::set<int> next;
        for (int a : out)
          for (int b : degree_set(k)) next.insert(a + b);
        out = std::move(next);
      }
      return out;
    }
    case Node::Kind::Pow: {
      std::set<int> base = degree_set(n->kids[0]);
      std::set<int> out{0};
      for (int i = 0; i < n->expo; ++i) {
        std::set<int> next;
        for (int a : out)
          for (int b : base) next.insert(a + b);
        out = std::move(next);
      }
      return out;
    }
    case Node::Kind::Cyc:
      return degree_set(n->kids[0]);
  }
  return {0};
}

int rank_of(const NodePtr& n) {
  auto d = degree_set(n);
  if (d.size() != 1)
    throw DegreeMismatchError("expression is not homogeneous: " + render(n));
  return *d.begin();
}

NodePtr shift_indices(const NodePtr& n, int k, int p) {
  if (n->kind == Node::Kind::Func) {
    int idx = (n->index - 1 + k) % p + 1;
    return func_node(n->func, idx);
  }
  if (n->kids.empty()) return n;
  auto copy = std::make_shared<Node>(*n);
  for (auto& kid : copy->kids) kid = shift_indices(kid, k, p);
  return copy;
}

NodePtr expand_cyclic_node(const NodePtr& n, int p) {
  if (n->kind == Node::Kind::Cyc) {
    std::vector<NodePtr> kids;
    std::vector<int> signs;
    for (int k = 0; k < p; ++k) {
      kids.push_back(shift_indices(n->kids[0], k, p));
      signs.push_back(n->alternating && (k % 2) ? -1 : +1);
    }
    return sum_node(std::move(kids), std::move(signs));
  }
  if (n->kids.empty()) return n;
  auto copy = std::make_shared<Node>(*n);
  for (auto& kid : copy->kids) kid = expand_cyclic_node(kid, p);
  return copy;
}

NodePtr simplify(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::Num:
    case Node::Kind::Sym:
    case Node::Kind::Func:
      return n;
    case Node::Kind::Sum: {
      std::vector<NodePtr> kids;
      std::vector<int> signs;
      for (size_t i = 0; i < n->kids.size(); ++i) {
        NodePtr k = simplify(n->kids[i]);
        int sg = n->signs[i];
        if (is_zero(k)) continue;
        if (k->kind == Node::Kind::Sum) {
          for (size_t j = 0; j < k->kids.size(); ++j) {
            kids.push_back(k->kids[j]);
            signs.push_back(sg * k->signs[j]);
          }
        } else if (k->kind == Node::Kind::Num && k->num < 0) {
          kids.push_back(num_node(-k->num));
          signs.push_back(-sg);
        } else {
          kids.push_back(k);
          signs.push_back(sg);
        }
      }
      if (kids.empty()) return num_node(0);
      if (kids.size() == 1 && signs[0] > 0) return kids[0];
      return sum_node(std::move(kids), std::move(signs));
    }
    case Node::Kind::Prod: {
      std::vector<NodePtr> kids;
      long long numeric = 1;
      for (const auto& kid : n->kids) {
        NodePtr k = simplify(kid);
        if (is_zero(k)) return num_node(0);
        if (k->kind == Node::Kind::Num) {
          numeric *= k->num;
        } else if (k->kind == Node::Kind::Prod) {
          for (const auto& kk : k->kids) {
            if (kk->kind == Node::Kind::Num)
              numeric *= kk->num;
            else
              kids.push_back(kk);
          }
        } else {
          kids.push_back(k);
        }
      }
      if (numeric != 1 || kids.empty())
        kids.insert(kids.begin(), num_node(numeric));
      if (kids.size() == 1) return kids[0];
      return prod_node(std::move(kids));
    }
    case Node::Kind::Div: {
      NodePtr a = simplify(n->kids[0]);
      NodePtr b = simplify(n->kids[1]);
      if (is_zero(a)) return num_node(0);
      if (b->kind == Node::Kind::Num && b->num == 1) return a;
      return div_node(a, b);
    }
    case Node::Kind::Pow: {
      NodePtr b = simplify(n->kids[0]);
      if (n->expo == 1) return b;
      if (n->expo == 0) return num_node(1);
      if (b->kind == Node::Kind::Pow) return pow_node(b->kids[0], b->expo * n->expo);
      return pow_node(b, n->expo);
    }
    case Node::Kind::Sqrt:
      return sqrt_node(simplify(n->kids[0]));
    case Node::Kind::Cyc: {
      NodePtr b = simplify(n->kids[0]);
      if (is_zero(b)) return num_node(0);
      return cyc_node(b, n->alternating);
    }
  }
  return n;
}

namespace {

void check_no_nested_cyc(const NodePtr& n, bool inside) {
  if (n->kind == Node::Kind::Cyc) {
    if (inside) throw ValidationError("nested cyclic sums are not allowed");
    check_no_nested_cyc(n->kids[0], true);
    return;
  }
  for (const auto& k : n->kids) check_no_nested_cyc(k, inside);
}

void check_indices(const NodePtr& n, int p) {
  if (n->kind == Node::Kind::Func) {
    if (n->index < 1 || n->index > p)
      throw ValidationError("lattice index " + std::to_string(n->index) +
                            " out of range for p = " + std::to_string(p));
  }
  for (const auto& k : n->kids) check_indices(k, p);
}

void check_alternating(const NodePtr& n, int p) {
  if (n->kind == Node::Kind::Cyc && n->alternating && p % 2 != 0)
    throw ValidationError("alternating cyclic sum requires even p");
  for (const auto& k : n->kids) check_alternating(k, p);
}

}  // namespace

void validate(IdentitySpec& spec) {
  if (spec.p < 2) throw ValidationError("identity requires p >= 2 (@p directive)");
  if (!spec.lhs || !spec.rhs) throw ValidationError("incomplete identity");

  for (const NodePtr& side : {spec.lhs, spec.rhs}) {
    check_no_nested_cyc(side, false);
    check_indices(side, spec.p);
    check_alternating(side, spec.p);
  }

  std::set<FuncKind> funcs;
  collect_funcs(spec.lhs, funcs);
  collect_funcs(spec.rhs, funcs);
  bool any_tilde = false, any_plain = false;
  for (FuncKind k : funcs) (is_tilde(k) ? any_tilde : any_plain) = true;
  if (any_tilde && any_plain)
    throw ValidationError("identity mixes 2K/p and 4K/p lattice functions");
  spec.spacing = any_tilde ? Spacing::Full : Spacing::Half;

  spec.rank = rank_of(spec.lhs);

  // Degree structure: every rhs block sits an even number of degrees
  // below the lhs rank.
  NodePtr rhs = simplify(spec.rhs);
  std::vector<std::pair<NodePtr, int>> blocks;
  if (rhs->kind == Node::Kind::Sum) {
    for (size_t i = 0; i < rhs->kids.size(); ++i)
      blocks.emplace_back(rhs->kids[i], rhs->signs[i]);
  } else {
    blocks.emplace_back(rhs, 1);
  }
  for (const auto& [block, sign] : blocks) {
    (void)sign;
    if (is_zero(block)) continue;
    for (int d : degree_set(block)) {
      int gap = spec.rank - d;
      if (gap < 0 || gap % 2 != 0)
        throw ValidationError("rhs block of degree " + std::to_string(d) +
                              " incompatible with rank " +
                              std::to_string(spec.rank));
    }
  }

  // Unknowns: A/B/C occurrences without a known closed form are fitted.
  std::set<char> syms;
  collect_syms(spec.lhs, syms);
  collect_syms(spec.rhs, syms);
  spec.to_fit.clear();
  for (char s : syms) {
    if (s != 'A' && s != 'B' && s != 'C') continue;
    if (!spec.constants_known.count(s)) spec.to_fit.insert(s);
  }
  for (const auto& [sym, closed] : spec.constants_known) {
    std::set<char> cs;
    collect_syms(closed, cs);
    for (char c : cs)
      if (c == 'A' || c == 'B' || c == 'C')
        throw ValidationError(std::string("closed form for ") + sym +
                              " refers to another unknown");
    if (contains_func(closed))
      throw ValidationError("closed-form constant contains lattice functions");
  }
}

IdentitySpec expand_cyclic(const IdentitySpec& spec) {
  IdentitySpec out = spec;
  out.lhs = expand_cyclic_node(spec.lhs, spec.p);
  out.rhs = expand_cyclic_node(spec.rhs, spec.p);
  return out;
}

std::string render_identity(const IdentitySpec& spec) {
  return render(spec.lhs) + " == " + render(spec.rhs);
}

std::string render_spec(const IdentitySpec& spec) {
  std::ostringstream out;
  out << "@p " << spec.p << "\n";
  if (!spec.eq.empty()) out << "@eq " << spec.eq << "\n";
  if (!spec.name.empty()) out << "@name \"" << spec.name << "\"\n";
  out << "@spacing " << (spec.spacing == Spacing::Half ? "half" : "full")
      << "\n";
  for (const auto& [sym, closed] : spec.constants_known)
    out << "@const " << sym << ' ' << render(closed) << "\n";
  out << render_identity(spec) << "\n";
  return out.str();
}

}  // namespace cjid
