#include "cjid/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace cjid {

namespace {

struct Token {
  enum class Type { Int, Ident, Punct, String, Newline, End };
  Type type;
  std::string text;
  long long value = 0;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (ch == '\n') {
        out.push_back(tok(Token::Type::Newline, "\n"));
        advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        Token t = tok(Token::Type::Int, "");
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += src_[pos_];
          advance();
        }
        t.value = std::stoll(t.text);
        out.push_back(t);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        Token t = tok(Token::Type::Ident, "");
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          t.text += src_[pos_];
          advance();
        }
        out.push_back(t);
        continue;
      }
      if (ch == '"') {
        Token t = tok(Token::Type::String, "");
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
          t.text += src_[pos_];
          advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"')
          throw ParseError("unterminated string", t.line, t.col);
        advance();
        out.push_back(t);
        continue;
      }
      if (ch == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
        out.push_back(tok(Token::Type::Punct, "=="));
        advance();
        advance();
        continue;
      }
      static const std::string punct = "[]()^*/+-@=";
      if (punct.find(ch) != std::string::npos) {
        out.push_back(tok(Token::Type::Punct, std::string(1, ch)));
        advance();
        continue;
      }
      throw ParseError(std::string("unexpected character '") + ch + "'", line_,
                       col_);
    }
    out.push_back(tok(Token::Type::End, ""));
    return out;
  }

 private:
  Token tok(Token::Type type, std::string text) {
    return {type, std::move(text), 0, line_, col_};
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::map<std::string, FuncKind> kFuncNames = {
    {"s", FuncKind::S},   {"c", FuncKind::C},   {"d", FuncKind::D},
    {"ts", FuncKind::TS}, {"tc", FuncKind::TC}, {"td", FuncKind::TD}};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<IdentitySpec> parse_file() {
    std::vector<IdentitySpec> out;
    while (!at_end()) {
      skip_newlines();
      if (at_end()) break;
      if (peek().type == Token::Type::Punct && peek().text == "@") {
        parse_directive();
      } else {
        out.push_back(parse_identity());
      }
      expect_line_end();
    }
    return out;
  }

  NodePtr parse_single_expression() {
    skip_newlines();
    NodePtr e = parse_expr();
    skip_newlines();
    if (!at_end()) fail("trailing input after expression");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_end() const { return peek().type == Token::Type::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  void skip_newlines() {
    while (peek().type == Token::Type::Newline) ++pos_;
  }

  void expect_line_end() {
    if (peek().type == Token::Type::Newline) {
      ++pos_;
    } else if (!at_end()) {
      fail("expected end of line");
    }
  }

  bool accept_punct(const std::string& p) {
    if (peek().type == Token::Type::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }

  long long expect_int() {
    if (peek().type != Token::Type::Int) fail("expected an integer");
    return next().value;
  }

  std::string expect_ident() {
    if (peek().type != Token::Type::Ident) fail("expected a name");
    return next().text;
  }

  void parse_directive() {
    expect_punct("@");
    std::string name = expect_ident();
    if (name == "p") {
      p_ = static_cast<int>(expect_int());
      if (p_ < 2) fail("@p requires an integer >= 2");
    } else if (name == "eq") {
      eq_ = expect_ident();
      eq_count_ = 0;
    } else if (name == "name") {
      if (peek().type == Token::Type::String) {
        name_ = next().text;
      } else {
        name_ = expect_ident();
      }
    } else if (name == "spacing") {
      std::string v = expect_ident();
      if (v == "half")
        spacing_ = Spacing::Half;
      else if (v == "full")
        spacing_ = Spacing::Full;
      else
        fail("@spacing expects 'half' or 'full'");
    } else if (name == "const") {
      std::string sym = expect_ident();
      if (sym.size() != 1 || (sym[0] != 'A' && sym[0] != 'B' && sym[0] != 'C'))
        fail("@const expects one of A, B, C");
      accept_punct("=");
      consts_[sym[0]] = parse_expr();
    } else {
      fail("unknown directive @" + name);
    }
  }

  IdentitySpec parse_identity() {
    int line = peek().line;
    IdentitySpec spec;
    spec.p = p_;
    spec.lhs = parse_expr();
    expect_punct("==");
    spec.rhs = parse_expr();
    spec.eq = eq_;
    ++eq_count_;
    if (!name_.empty()) {
      spec.name = name_;
      name_.clear();
    } else if (!eq_.empty()) {
      spec.name = eq_count_ == 1 ? eq_ : eq_ + "." + std::to_string(eq_count_);
    } else {
      spec.name = "line" + std::to_string(line);
    }
    // Second identity under the same @eq: retro-rename the first to .1.
    spec.constants_known = consts_;
    try {
      validate(spec);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line, 1);
    }
    if (spacing_ && spec.spacing != *spacing_)
      throw ParseError("@spacing directive disagrees with function kinds used",
                       line, 1);
    consts_.clear();
    return spec;
  }

  NodePtr parse_expr() {
    std::vector<NodePtr> kids;
    std::vector<int> signs;
    int sign = accept_punct("-") ? -1 : +1;
    kids.push_back(parse_term());
    signs.push_back(sign);
    while (true) {
      if (accept_punct("+"))
        sign = +1;
      else if (accept_punct("-"))
        sign = -1;
      else
        break;
      kids.push_back(parse_term());
      signs.push_back(sign);
    }
    if (kids.size() == 1 && signs[0] > 0) return kids[0];
    return sum_node(std::move(kids), std::move(signs));
  }

  NodePtr parse_term() {
    NodePtr node = parse_factor();
    std::vector<NodePtr> prod{node};
    while (true) {
      if (accept_punct("*")) {
        prod.push_back(parse_factor());
      } else if (accept_punct("/")) {
        NodePtr num = prod.size() == 1 ? prod[0] : prod_node(prod);
        NodePtr den = parse_factor();
        prod = {div_node(num, den)};
      } else {
        break;
      }
    }
    return prod.size() == 1 ? prod[0] : prod_node(std::move(prod));
  }

  NodePtr parse_factor() {
    NodePtr atom = parse_atom();
    if (accept_punct("^")) {
      long long e = expect_int();
      if (e < 1) fail("exponent must be a positive integer");
      return pow_node(atom, static_cast<int>(e));
    }
    return atom;
  }

  NodePtr parse_atom() {
    if (peek().type == Token::Type::Int) return num_node(next().value);
    if (accept_punct("(")) {
      NodePtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (peek().type != Token::Type::Ident) fail("expected an operand");
    const Token& t = next();
    const std::string& id = t.text;
    if (id == "cyc" || id == "acyc") {
      expect_punct("(");
      NodePtr body = parse_expr();
      expect_punct(")");
      return cyc_node(body, id == "acyc");
    }
    if (id == "sqrt") {
      expect_punct("(");
      NodePtr arg = parse_expr();
      expect_punct(")");
      return sqrt_node(arg);
    }
    auto fit = kFuncNames.find(id);
    if (fit != kFuncNames.end() &&
        peek().type == Token::Type::Punct && peek().text == "[") {
      expect_punct("[");
      long long idx = expect_int();
      expect_punct("]");
      return func_node(fit->second, static_cast<int>(idx));
    }
    if (id == "m" || id == "q" || id == "t" || id == "A" || id == "B" ||
        id == "C")
      return sym_node(id[0]);
    throw ParseError("unknown name '" + id + "'", t.line, t.col);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int p_ = 0;
  std::string eq_;
  int eq_count_ = 0;
  std::string name_;
  std::optional<Spacing> spacing_;
  std::map<char, NodePtr> consts_;
};

}  // namespace

std::vector<IdentitySpec> parse(std::string_view source) {
  Parser parser(Lexer(source).run());
  auto specs = parser.parse_file();
  // Give trailing .1 suffixes to the first identity of multi-identity
  // equation groups so names stay unique.
  std::map<std::string, int> counts;
  for (const auto& s : specs) ++counts[s.name];
  for (auto& s : specs) {
    if (counts[s.name] > 1)
      throw ParseError("duplicate identity name '" + s.name + "'", 0, 0);
  }
  for (size_t i = 0; i + 1 < specs.size(); ++i) {
    if (!specs[i].eq.empty() && specs[i].name == specs[i].eq &&
        specs[i + 1].name == specs[i].eq + ".2")
      specs[i].name = specs[i].eq + ".1";
  }
  return specs;
}

NodePtr parse_expression(std::string_view source) {
  Parser parser(Lexer(source).run());
  return parser.parse_single_expression();
}

}  // namespace cjid
