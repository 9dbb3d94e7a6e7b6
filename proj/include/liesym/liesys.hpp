#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liesym/integrator.hpp"
#include "liesym/liealg.hpp"

namespace liesym {

// X(t,x) = sum_a b_a(t) X_a(x), plus the gauge b0(t) used by the symmetry
// system.
struct LieSystemDef {
  Symbol time{"t"};
  std::vector<VectorField> basis;
  std::optional<StructureTensor> tensor;
  std::vector<Expr> coeffs;
  Expr gauge_b0;
  std::string excluded;  // human-readable excluded locus
  std::function<bool(std::span<const double> x)> in_excluded;
  std::vector<std::pair<double, double>> sample_box;  // per state variable

  const std::vector<Symbol>& vars() const { return basis.front().vars(); }
  std::size_t rank() const { return basis.size(); }
  VectorField field() const;
  VectorField autonomized() const { return autonomize(field(), time); }
};

const StructureTensor& ensure_tensor(LieSystemDef& sys);
StructureTensor tensor_of(const LieSystemDef& sys);

struct SymmetryBasis {
  std::vector<Symbol> f;  // f0..fr
  std::vector<VectorField> z;  // Z0..Zr
  std::vector<VectorField> w;  // W1..Wr
  std::vector<VectorField> y;  // Y1..Yr

  std::vector<VectorField> all() const;
};

SymmetryBasis symmetry_system_basis(const StructureTensor& c);

// df0/dt = b0, df_a/dt = f0 b_a' + b_a b0 + sum b_b f_g c(g,b,a), written over
// the basis Z, W, Y with coefficients b0, b0 b_a, b_a', b_a.
LieSystemDef build_symmetry_system(const LieSystemDef& sys);

// Integrates dx/dt = X(t,x) with RK4.
Trajectory integrate(const LieSystemDef& sys, std::vector<double> x0, double t0, double t1, double step,
                     IntegratorOptions opts = {});

RhsFn make_rhs(const LieSystemDef& sys);

// Y = f0 d/dt + sum f_a X_a; the multiplier in [Y, Xbar] = h Xbar is
// h = -df0/dt, i.e. minus the gauge b0 of the symmetry system.
struct SymmetryCandidate {
  Symbol time{"t"};
  std::vector<Expr> f;
  bool sampled = false;
  std::string label;

  Expr multiplier() const { return -differentiate(f.at(0), time); }
};

// Wraps a symmetry-system trajectory as a candidate. Values between nodes use
// Hermite interpolation; first and second derivatives come from the
// symmetry-system right-hand side, never from finite differences.
SymmetryCandidate candidate_from_trajectory(const LieSystemDef& symmetry_system, const Trajectory& traj,
                                            const std::string& label = "trajectory");

// Opaque function t -> component of a tabulated curve, with derivatives of
// order k supplied by pick(k, t, state).
OpaqueFunctionPtr tabulated_function(const std::string& name, std::shared_ptr<const Trajectory> traj, RhsFn rhs,
                                     std::function<double(int order, double t, std::span<const double> state)> pick,
                                     int max_order);

// Tabulated solution of ds/dt = gamma(t, s) exposed as one opaque leaf per
// state component. Derivatives of order k are the exact iterated total
// derivatives of gamma evaluated on the interpolated state.
std::vector<Expr> tabulated_state(const std::string& name, const Trajectory& traj, const std::vector<Expr>& gamma,
                                  const std::vector<Symbol>& state, Symbol time, int max_order = 2);

struct ResidualGrid {
  std::vector<double> t;
  std::vector<std::vector<double>> x;  // state points; every t is paired with every x
};

ResidualGrid make_grid(const LieSystemDef& sys, double t0, double t1, std::size_t nt, std::size_t nx,
                       std::uint64_t seed);

struct ResidualReport {
  double max_abs = 0.0;
  bool exact_zero = false;  // decided symbolically
  std::size_t points = 0;
};

// max |[Y, Xbar] - h Xbar| over the grid, computed from the generic Lie
// bracket on (t, x); independent of build_symmetry_system.
ResidualReport symmetry_residual(const SymmetryCandidate& y, const LieSystemDef& sys, const ResidualGrid& grid);

VectorField candidate_field(const SymmetryCandidate& y, const LieSystemDef& sys);

struct TransportReport {
  double defect_eps = 0.0;
  double defect_half = 0.0;
  double ratio = 0.0;  // NaN when both defects vanish
  bool exact = false;
  bool flagged = false;
};

// Moves the points of a solution by the Euler step of Y's flow at eps and
// eps/2 and measures how far the moved curve is from solving the system.
TransportReport flow_transport_check(const LieSystemDef& sys, const SymmetryCandidate& y, const Trajectory& sol,
                                     double eps);

// Derivation D(e) = factor * de/dvar; lets callers differentiate in t after a
// change of variable t = t(s).
struct Derivation {
  Symbol var;
  Expr factor{1};
  Expr operator()(const Expr& e) const { return factor * differentiate(e, var); }
};

// f3''' - [f0''' + 4 b0 eta + 2 eta' f0 - 2 eta' f3 - 4 eta f3']
Expr riccati_f3_ode_residual(const Expr& f0, const Expr& f3, const Expr& eta, const Expr& b0, const Derivation& d);

// Closed-form Aff(R) symmetry with b0 = 0, f0 = k: f2 = k b + c1 and f1 from
// nested quadratures from 0, tabulated on [0, t_end] by composite Simpson.
SymmetryCandidate aff_closed_form(const Expr& a, const Expr& b, const Rational& k, const Rational& c1,
                                  const Rational& c2, double t_end, Symbol time = Symbol("t"),
                                  std::size_t intervals = 2000);

// {f, g} = f g' - g f'
Expr function_bracket(const Expr& f, const Expr& g, Symbol time = Symbol("t"));

// Bracket of two symmetries written as a candidate (f0 entries bracket by
// {.,.}; the rest through the structure constants).
SymmetryCandidate candidate_bracket(const SymmetryCandidate& a, const SymmetryCandidate& b, const StructureTensor& c);

struct AlgebraClosureReport {
  double max_residual = 0.0;
  std::size_t brackets_checked = 0;
  // [v_i, v_j] = sum_k c(i,j,k) v_k for the initial vectors, row-major r^3
  std::vector<double> initial_constants;
};

// f0 = 0, b0 = 0 symmetries: integrates df/dt = sum b_b f_g c(g,b,a) from r
// independent initial vectors and checks their brackets close with the
// constants of the initial vectors at the sampled times.
AlgebraClosureReport symmetry_algebra_f0_zero(const LieSystemDef& sys, const std::vector<std::vector<double>>& initial,
                                              double t0, double t1, double step, std::size_t samples = 11);

}  // namespace liesym
