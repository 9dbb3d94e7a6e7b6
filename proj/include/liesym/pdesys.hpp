#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "liesym/liesys.hpp"

namespace liesym {

// dx/dt_l = sum_a b_{a l}(t_1..t_s) X_a(x), l = 1..s.
struct PDELieSystemDef {
  std::vector<Symbol> times;
  std::vector<VectorField> basis;
  std::optional<StructureTensor> tensor;
  std::vector<std::vector<Expr>> coeffs;  // coeffs[a][l]
  std::vector<std::pair<double, double>> time_box;  // per time, for lattice checks
  std::vector<std::pair<double, double>> sample_box;  // per state variable
  std::string label;

  const std::vector<Symbol>& vars() const { return basis.front().vars(); }
  std::size_t rank() const { return basis.size(); }
  std::size_t s() const { return times.size(); }

  VectorField field(std::size_t l) const;
  // d/dt_l + X_l on (t_1..t_s, x)
  VectorField autonomized(std::size_t l) const;
};

void validate(const PDELieSystemDef& sys);
StructureTensor tensor_of(const PDELieSystemDef& sys);

struct CurvatureReport {
  double max_abs = 0.0;
  bool exact_zero = false;
  std::size_t points = 0;

  bool integrable(double tol = 1e-9) const { return exact_zero || max_abs <= tol; }
};

// d b_{g k}/d t_l - d b_{g l}/d t_k + sum b_{a l} b_{b k} c(a,b,g) for k < l.
// Decided exactly when opaque-free, otherwise on the 5^s lattice of time_box.
std::vector<Expr> curvature_terms(const PDELieSystemDef& sys);
CurvatureReport curvature_residual(const PDELieSystemDef& sys);

// dX_l/dt_k - dX_k/dt_l + [X_k, X_l] as a field; uses the fields, not the tensor.
VectorField curvature_field(const PDELieSystemDef& sys, std::size_t k, std::size_t l);
CurvatureReport field_curvature_residual(const PDELieSystemDef& sys, std::size_t nx = 8, std::uint64_t seed = 7);

// df_p/dt_l = sum_{a,d} b_{a l} f_d c(d,a,p); Y_a over f_1..f_r, same b.
PDELieSystemDef build_pde_symmetry_system(const PDELieSystemDef& sys, double tol = 1e-9);

struct TimePath {
  std::vector<std::vector<double>> waypoints;
  std::size_t steps = 200;  // per segment
};

// Segment k is parameterized by tau in [k, k+1]; the system is pulled back by
// the chain rule dx/dtau = sum_l (Q_l - P_l) X_l.
Trajectory integrate_along_path(const PDELieSystemDef& sys, std::vector<double> x0, const TimePath& path,
                                IntegratorOptions opts = {});

struct PDEGrid {
  std::vector<std::vector<double>> t;
  std::vector<std::vector<double>> x;
};

PDEGrid make_pde_grid(const PDELieSystemDef& sys, std::size_t per_axis, std::size_t nx, std::uint64_t seed);

struct PDESymmetryReport {
  double bracket_max = 0.0;  // max |[Xbar^l, Y]|
  double jet_max = 0.0;  // max |Yhat F^i_l| on the solution submanifold
  double agreement = 0.0;  // max difference between the two oracles
  bool exact_zero = false;
  std::size_t points = 0;
};

// Y = sum f_b(t) X_b. `y` may live on x or on (times, x); a nonzero d/dt_l
// component raises NotVertical.
PDESymmetryReport pde_symmetry_residual(const VectorField& y, const PDELieSystemDef& sys, const PDEGrid& grid);

VectorField pde_candidate_field(const std::vector<Expr>& f, const PDELieSystemDef& sys);

// f_b(t) solving the symmetry system from f(base) = f_init, one opaque
// s-argument leaf per component. Values integrate along the axis-ordered
// L-path from base; first partials come from the right-hand side.
std::vector<Expr> sampled_pde_candidate(const PDELieSystemDef& symmetry_system, std::vector<double> base,
                                        std::vector<double> f_init, double step = 1e-3);

}  // namespace liesym
