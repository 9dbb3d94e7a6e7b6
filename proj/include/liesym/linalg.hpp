#pragma once

// Exact Gaussian elimination over the rationals.

#include <optional>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

using RMatrix = std::vector<std::vector<Rational>>;

struct Echelon {
  RMatrix rows;                      // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(RMatrix m, std::size_t cols);
std::size_t rank(const RMatrix& m, std::size_t cols);

// Basis of {v : m v = 0}.
RMatrix nullspace(const RMatrix& m, std::size_t cols);

// Some solution of m v = rhs, or nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(const RMatrix& m, const std::vector<Rational>& rhs, std::size_t cols);

RMatrix inverse(const RMatrix& m);
RMatrix identity(std::size_t n);

// Best rational approximation with bounded denominator.
Rational rationalize(double value, long max_den = 1000000);

}  // namespace liesym
