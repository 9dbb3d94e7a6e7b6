#pragma once

// Opaque scalar functions: elementary and special functions that the symbolic
// core only ever evaluates, plus smooth placeholder profiles standing in for
// arbitrary coefficient curves such as eta(t).

#include <map>
#include <string>
#include <string_view>

#include "liesym/expr.hpp"

namespace liesym {

class FunctionRegistry {
 public:
  void add(OpaqueFunctionPtr fn);
  OpaqueFunctionPtr find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

  // Elementary and special functions plus the standard placeholder profiles.
  static const FunctionRegistry& builtin();

 private:
  std::map<std::string, OpaqueFunctionPtr, std::less<>> fns_;
};

namespace fn {

OpaqueFunctionPtr sin();
OpaqueFunctionPtr cos();
OpaqueFunctionPtr exp();
OpaqueFunctionPtr log();
OpaqueFunctionPtr bessel_j1();
OpaqueFunctionPtr bessel_y1();
OpaqueFunctionPtr airy_ai();
OpaqueFunctionPtr airy_bi();

// x -> x^p for non-integer rational p, defined for x > 0.
OpaqueFunctionPtr power(const Rational& p);

// x -> x^p for a real exponent that has no exact rational form.
OpaqueFunctionPtr power_real(double p);

// t -> f(alpha t + beta) with derivatives alpha^n f^(n); used when the
// scaling constants are irrational.
OpaqueFunctionPtr affine(const OpaqueFunctionPtr& f, double alpha, double beta);

// A * sin(w t + phi) + B with parameters derived from the name, so every
// placeholder is a fixed, reproducible smooth function.
OpaqueFunctionPtr placeholder(std::string_view name);

}  // namespace fn

Expr power(const Expr& base, const Rational& exponent);
Expr sqrt(const Expr& base);
Expr call(const OpaqueFunctionPtr& f, const Expr& arg);

}  // namespace liesym
