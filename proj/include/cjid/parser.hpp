#ifndef CJID_PARSER_HPP
#define CJID_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cjid/expr.hpp"

namespace cjid {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int col)
      : std::runtime_error(what + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses DSL source (one statement per line, '#' comments) into
/// validated identity specs.
std::vector<IdentitySpec> parse(std::string_view source);

/// Parses a single expression, e.g. a coefficient closed form or a
/// lattice polynomial.  `p` is used for validation of indices when > 0.
NodePtr parse_expression(std::string_view source);

}  // namespace cjid

#endif  // CJID_PARSER_HPP
