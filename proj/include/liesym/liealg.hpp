#pragma once

#include <string>
#include <vector>

#include "liesym/linalg.hpp"
#include "liesym/vectorfield.hpp"

namespace liesym {

// c(a,b,g) with [X_a, X_b] = sum_g c(a,b,g) X_g; indices are 0-based.
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(std::size_t r) : r_(r), c_(r * r * r, Rational(0)) {}

  std::size_t dim() const { return r_; }
  const Rational& operator()(std::size_t a, std::size_t b, std::size_t g) const { return c_[idx(a, b, g)]; }

  // Sets c(a,b,g) = v and c(b,a,g) = -v.
  void set_bracket(std::size_t a, std::size_t b, std::size_t g, const Rational& v);

  bool is_antisymmetric() const;
  bool is_zero() const;
  std::string to_string() const;

  // True when extracted by least squares on sampled points.
  bool numerical = false;

  friend bool operator==(const StructureTensor& x, const StructureTensor& y) { return x.r_ == y.r_ && x.c_ == y.c_; }

 private:
  std::size_t idx(std::size_t a, std::size_t b, std::size_t g) const { return (a * r_ + b) * r_ + g; }
  std::size_t r_ = 0;
  std::vector<Rational> c_;
};

// [X1,X2]=X1, [X1,X3]=2X2, [X2,X3]=X3
StructureTensor sl2_tensor();
// [X1,X2]=X1
StructureTensor aff_tensor();

StructureTensor extract_structure_constants(const std::vector<VectorField>& basis);

// Throws DependentBasis when the fields are linearly dependent over R.
void check_independent(const std::vector<VectorField>& basis);

// [X_a,X_b] - sum_g c(a,b,g) X_g
VectorField closure_residual(const std::vector<VectorField>& basis, const StructureTensor& c, std::size_t a,
                             std::size_t b);

Rational jacobi_residual(const StructureTensor& c);

// Basis of the center as coefficient vectors.
RMatrix center(const StructureTensor& c);

// Tensor of the basis X'_a = sum_i p[a][i] X_i.
StructureTensor change_basis(const StructureTensor& c, const RMatrix& p);

}  // namespace liesym
