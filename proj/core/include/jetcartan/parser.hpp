#pragma once

#include <stdexcept>
#include <string>

#include "jetcartan/expr.hpp"

namespace jetcartan {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;  // byte offset into the source text
};

/// Parses the expression DSL: numbers, t, x1..xn, y1..yn, + - * / ^,
/// unary minus, parentheses, sin/cos/exp/log/sqrt. Exponents must fold to
/// rational constants. n is the chart dimension for index range checks.
Expr parse_expr(const std::string& src, int n);

}  // namespace jetcartan
