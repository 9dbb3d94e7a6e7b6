#pragma once

#include <map>
#include <string>
#include <string_view>

#include "liesym/expr.hpp"
#include "liesym/functions.hpp"

namespace liesym {

struct ParseContext {
  // Named rational constants substituted while parsing, e.g. c0 -> 1/2.
  std::map<std::string, Rational, std::less<>> params;
  const FunctionRegistry* registry = &FunctionRegistry::builtin();
};

// Infix syntax: + - * / ^, parentheses, decimal or rational literals,
// identifiers, sqrt/sin/cos/exp/log calls and opaque leaves written as
// "@eta(t)" or "@eta'(t)" (one prime per derivative order).
Expr parse_expr(std::string_view text, const ParseContext& ctx = {});

}  // namespace liesym
