#pragma once

#include <string>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

// sum_i comps[i] d/d vars[i]. Components may depend on symbols outside vars
// (time, parameters); those are treated as constants by the bracket.
class VectorField {
 public:
  VectorField() = default;
  VectorField(std::vector<Symbol> vars, std::vector<Expr> components);

  static VectorField zero(std::vector<Symbol> vars);
  static VectorField partial(std::vector<Symbol> vars, std::size_t i);

  const std::vector<Symbol>& vars() const { return vars_; }
  const std::vector<Expr>& components() const { return comps_; }
  std::size_t dim() const { return vars_.size(); }
  const Expr& operator[](std::size_t i) const { return comps_[i]; }

  // Derivation X(g) = sum_i X^i dg/dx_i.
  Expr apply(const Expr& g) const;

  bool is_zero() const;
  bool has_opaque() const;

  // Same field written over a superset of variables (extra components 0).
  VectorField embed(const std::vector<Symbol>& vars) const;

  std::string to_string() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a);
  friend VectorField operator*(const Expr& g, const VectorField& a);
  friend bool identical(const VectorField& a, const VectorField& b);

 private:
  std::vector<Symbol> vars_;
  std::vector<Expr> comps_;
};

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i; both fields must share variables.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// d/dt + X on (t, x); t is prepended to the variable list.
VectorField autonomize(const VectorField& x, Symbol time);

// First jet bundle coordinates (t_l, x_j, x_{j,l}).
struct JetSpace {
  std::vector<Symbol> times;
  std::vector<Symbol> deps;
  std::vector<std::vector<Symbol>> jets;  // jets[j][l] = x_{j,l}

  std::vector<Symbol> coordinates() const;
};

JetSpace make_jet_space(const std::vector<Symbol>& times, const std::vector<Symbol>& deps);

// D_l g = dg/dt_l + sum_j x_{j,l} dg/dx_j
Expr total_derivative(const JetSpace& space, const Expr& g, std::size_t l);

struct JetVectorField {
  JetSpace space;
  VectorField field;  // over space.coordinates()

  // Drops the x_{j,l} components, recovering the base field on (t, x).
  VectorField project() const;
};

// Y = sum_k eta_k(t, x) d/dx_k, lifted with jet components
// D_q eta_k. Throws NotVertical if Y has a nonzero d/dt_l component.
JetVectorField prolong_first(const VectorField& y, const std::vector<Symbol>& times);

}  // namespace liesym
