#include "liesym/liesys.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

namespace liesym {

VectorField LieSystemDef::field() const {
  if (basis.empty()) throw Error(ErrorKind::DimensionMismatch, "Lie system without basis");
  if (coeffs.size() != basis.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient count differs from basis size");
  VectorField out = VectorField::zero(basis.front().vars());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (coeffs[a].is_structurally_zero()) continue;
    out = out + coeffs[a] * basis[a];
  }
  return out;
}

const StructureTensor& ensure_tensor(LieSystemDef& sys) {
  if (!sys.tensor) sys.tensor = extract_structure_constants(sys.basis);
  return *sys.tensor;
}

StructureTensor tensor_of(const LieSystemDef& sys) {
  return sys.tensor ? *sys.tensor : extract_structure_constants(sys.basis);
}

std::vector<VectorField> SymmetryBasis::all() const {
  std::vector<VectorField> out = z;
  out.insert(out.end(), w.begin(), w.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

SymmetryBasis symmetry_system_basis(const StructureTensor& c) {
  std::size_t r = c.dim();
  SymmetryBasis sb;
  sb.f = make_symbols("f", r + 1);
  for (std::size_t a = 0; a <= r; ++a) sb.z.push_back(VectorField::partial(sb.f, a));
  for (std::size_t a = 1; a <= r; ++a) sb.w.push_back(Expr(sb.f[0]) * VectorField::partial(sb.f, a));
  for (std::size_t a = 0; a < r; ++a) {
    std::vector<Expr> comps(r + 1);
    for (std::size_t b = 0; b < r; ++b) {
      for (std::size_t g = 0; g < r; ++g) {
        if (c(b, a, g) != 0) comps[g + 1] += Expr(c(b, a, g)) * Expr(sb.f[b + 1]);
      }
    }
    sb.y.emplace_back(sb.f, std::move(comps));
  }
  return sb;
}

LieSystemDef build_symmetry_system(const LieSystemDef& sys) {
  StructureTensor c = tensor_of(sys);
  SymmetryBasis sb = symmetry_system_basis(c);
  std::size_t r = c.dim();
  std::vector<Expr> coeffs;
  coeffs.push_back(sys.gauge_b0);
  for (std::size_t a = 0; a < r; ++a) coeffs.push_back(sys.gauge_b0 * sys.coeffs[a]);
  for (std::size_t a = 0; a < r; ++a) {
    try {
      coeffs.push_back(differentiate(sys.coeffs[a], sys.time));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OpaqueNoDerivative) throw;
      throw Error(ErrorKind::MissingDerivative, "coefficient b" + std::to_string(a + 1) + ": " + e.what());
    }
  }
  for (std::size_t a = 0; a < r; ++a) coeffs.push_back(sys.coeffs[a]);
  LieSystemDef out;
  out.time = sys.time;
  out.basis = sb.all();
  out.coeffs = std::move(coeffs);
  out.sample_box.assign(r + 1, {-1.0, 1.0});
  return out;
}

RhsFn make_rhs(const LieSystemDef& sys) {
  std::vector<Symbol> slots{sys.time};
  const auto& vars = sys.vars();
  slots.insert(slots.end(), vars.begin(), vars.end());
  VectorField x = sys.field();
  auto compiled = std::make_shared<std::vector<CompiledExpr>>();
  for (const auto& c : x.components()) compiled->emplace_back(c, slots);
  return [compiled](double t, std::span<const double> y, std::span<double> dy) {
    thread_local std::vector<double> buf;
    buf.assign(1, t);
    buf.insert(buf.end(), y.begin(), y.end());
    for (std::size_t i = 0; i < compiled->size(); ++i) dy[i] = (*compiled)[i](buf);
  };
}

Trajectory integrate(const LieSystemDef& sys, std::vector<double> x0, double t0, double t1, double step,
                     IntegratorOptions opts) {
  if (x0.size() != sys.vars().size()) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong dimension");
  if (!opts.excluded && sys.in_excluded) {
    auto ex = sys.in_excluded;
    opts.excluded = [ex](double, std::span<const double> y) { return ex(y); };
  }
  return integrate_rk4(make_rhs(sys), std::move(x0), t0, t1, step, opts);
}

OpaqueFunctionPtr tabulated_function(const std::string& name, std::shared_ptr<const Trajectory> traj, RhsFn rhs,
                                     std::function<double(int, double, std::span<const double>)> pick,
                                     int max_order) {
  auto f = std::make_shared<OpaqueFunction>();
  f->name = name;
  f->arity = 1;
  f->max_order = max_order;
  f->evaluate = [traj = std::move(traj), rhs = std::move(rhs), pick = std::move(pick)](
                    std::span<const int> orders, std::span<const double> args) {
    auto state = interpolate(*traj, rhs, args[0]);
    return pick(orders[0], args[0], state);
  };
  return f;
}

namespace {

std::string fresh_name(const std::string& stem) {
  static std::atomic<unsigned> counter{0};
  return stem + "#" + std::to_string(counter.fetch_add(1));
}

}  // namespace

std::vector<Expr> tabulated_state(const std::string& name, const Trajectory& traj, const std::vector<Expr>& gamma,
                                  const std::vector<Symbol>& state, Symbol time, int max_order) {
  std::size_t n = state.size();
  std::vector<Symbol> slots{time};
  slots.insert(slots.end(), state.begin(), state.end());
  // derivs[k][i]: k-th total derivative of state component i, as a function of (t, s)
  std::vector<std::vector<Expr>> derivs;
  std::vector<Expr> base;
  for (Symbol s : state) base.emplace_back(s);
  derivs.push_back(base);
  for (int k = 1; k <= max_order; ++k) {
    std::vector<Expr> next;
    for (std::size_t i = 0; i < n; ++i) {
      const Expr& prev = derivs.back()[i];
      Expr d = differentiate(prev, time);
      for (std::size_t j = 0; j < n; ++j) {
        if (prev.depends_on(state[j])) d += gamma[j] * differentiate(prev, state[j]);
      }
      next.push_back(d);
    }
    derivs.push_back(std::move(next));
  }
  auto compiled = std::make_shared<std::vector<std::vector<CompiledExpr>>>();
  for (const auto& level : derivs) {
    std::vector<CompiledExpr> row;
    for (const auto& e : level) row.emplace_back(e, slots);
    compiled->push_back(std::move(row));
  }
  auto gamma_c = std::make_shared<std::vector<CompiledExpr>>();
  for (const auto& g : gamma) gamma_c->emplace_back(g, slots);
  RhsFn rhs = [gamma_c](double t, std::span<const double> y, std::span<double> dy) {
    std::vector<double> buf{t};
    buf.insert(buf.end(), y.begin(), y.end());
    for (std::size_t i = 0; i < gamma_c->size(); ++i) dy[i] = (*gamma_c)[i](buf);
  };
  auto shared = std::make_shared<const Trajectory>(traj);
  std::string stem = fresh_name(name);
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto pick = [compiled, i](int order, double t, std::span<const double> s) {
      std::vector<double> buf{t};
      buf.insert(buf.end(), s.begin(), s.end());
      return (*compiled)[static_cast<std::size_t>(order)][i](buf);
    };
    auto fn = tabulated_function(stem + "_" + state[i].name(), shared, rhs, pick, max_order);
    out.push_back(Expr::apply(fn, {Expr(time)}));
  }
  return out;
}

SymmetryCandidate candidate_from_trajectory(const LieSystemDef& symmetry_system, const Trajectory& traj,
                                            const std::string& label) {
  SymmetryCandidate c;
  c.time = symmetry_system.time;
  c.sampled = true;
  c.label = label;
  c.f = tabulated_state(label, traj, symmetry_system.field().components(), symmetry_system.vars(),
                        symmetry_system.time, 2);
  return c;
}

ResidualGrid make_grid(const LieSystemDef& sys, double t0, double t1, std::size_t nt, std::size_t nx,
                       std::uint64_t seed) {
  ResidualGrid g;
  for (std::size_t k = 0; k < nt; ++k) {
    g.t.push_back(nt == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(nt - 1));
  }
  std::mt19937_64 rng(seed);
  std::size_t n = sys.vars().size();
  std::vector<std::pair<double, double>> box = sys.sample_box;
  if (box.size() != n) box.assign(n, {-1.0, 1.0});
  for (std::size_t k = 0; k < nx; ++k) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> d(box[i].first, box[i].second);
      p[i] = d(rng);
    }
    g.x.push_back(std::move(p));
  }
  return g;
}

VectorField candidate_field(const SymmetryCandidate& y, const LieSystemDef& sys) {
  if (y.f.size() != sys.rank() + 1) throw Error(ErrorKind::DimensionMismatch, "candidate needs f0..fr");
  VectorField spatial = VectorField::zero(sys.vars());
  for (std::size_t a = 0; a < sys.rank(); ++a) {
    if (!y.f[a + 1].is_structurally_zero()) spatial = spatial + y.f[a + 1] * sys.basis[a];
  }
  std::vector<Symbol> vars{sys.time};
  vars.insert(vars.end(), sys.vars().begin(), sys.vars().end());
  std::vector<Expr> comps{y.f[0]};
  comps.insert(comps.end(), spatial.components().begin(), spatial.components().end());
  return VectorField(std::move(vars), std::move(comps));
}

namespace {

double grid_max(const std::vector<Expr>& comps, Symbol time, const std::vector<Symbol>& vars, const ResidualGrid& grid,
                std::size_t* points) {
  std::vector<Symbol> slots{time};
  slots.insert(slots.end(), vars.begin(), vars.end());
  std::vector<CompiledExpr> compiled;
  for (const auto& c : comps) compiled.emplace_back(c, slots);
  double worst = 0.0;
  std::size_t count = 0;
  std::vector<double> buf(slots.size());
  for (double t : grid.t) {
    for (const auto& x : grid.x) {
      buf[0] = t;
      std::copy(x.begin(), x.end(), buf.begin() + 1);
      for (const auto& c : compiled) {
        double v = c(buf);
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(v));
      }
      ++count;
    }
  }
  if (points) *points = count;
  return worst;
}

}  // namespace

ResidualReport symmetry_residual(const SymmetryCandidate& y, const LieSystemDef& sys, const ResidualGrid& grid) {
  if (grid.t.empty() || grid.x.empty()) throw Error(ErrorKind::GridEmpty, "residual grid has no points");
  VectorField yf = candidate_field(y, sys);
  VectorField xbar = sys.autonomized();
  VectorField r = lie_bracket(yf, xbar) - y.multiplier() * xbar;
  ResidualReport rep;
  if (!r.has_opaque() && r.is_zero()) {
    rep.exact_zero = true;
    rep.points = grid.t.size() * grid.x.size();
    return rep;
  }
  rep.max_abs = grid_max(r.components(), sys.time, sys.vars(), grid, &rep.points);
  return rep;
}

TransportReport flow_transport_check(const LieSystemDef& sys, const SymmetryCandidate& y, const Trajectory& sol,
                                     double eps) {
  if (sol.t.empty()) throw Error(ErrorKind::GridEmpty, "empty solution");
  VectorField yf = candidate_field(y, sys);
  VectorField xbar = sys.autonomized();
  std::vector<Symbol> slots = xbar.vars();
  std::size_t n = sys.vars().size();
  CompiledExpr xi(yf[0], slots);
  CompiledExpr xbar_xi(xbar.apply(yf[0]), slots);
  std::vector<CompiledExpr> eta, xbar_eta, field;
  for (std::size_t i = 0; i < n; ++i) {
    eta.emplace_back(yf[i + 1], slots);
    xbar_eta.emplace_back(xbar.apply(yf[i + 1]), slots);
    field.emplace_back(xbar[i + 1], slots);
  }
  auto defect = [&](double e) {
    double worst = 0.0;
    std::vector<double> p(n + 1), q(n + 1);
    for (std::size_t k = 0; k < sol.t.size(); ++k) {
      p[0] = sol.t[k];
      std::copy(sol.y[k].begin(), sol.y[k].end(), p.begin() + 1);
      try {
        q[0] = p[0] + e * xi(p);
        for (std::size_t i = 0; i < n; ++i) q[i + 1] = p[i + 1] + e * eta[i](p);
        if (sys.in_excluded && sys.in_excluded(std::span<const double>(q).subspan(1))) {
          throw Error(ErrorKind::TransportLeftDomain, "transported point is in the excluded locus");
        }
        double dt = 1.0 + e * xbar_xi(p);
        for (std::size_t i = 0; i < n; ++i) {
          double dx = field[i](p) + e * xbar_eta[i](p);
          double d = std::abs(dx / dt - field[i](q));
          if (!std::isfinite(d)) throw Error(ErrorKind::TransportLeftDomain, "transported curve is singular");
          worst = std::max(worst, d);
        }
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::DivisionByZero) {
          throw Error(ErrorKind::TransportLeftDomain, std::string("transported point is singular: ") + err.what());
        }
        throw;
      }
    }
    return worst;
  };
  TransportReport rep;
  rep.defect_eps = defect(eps);
  rep.defect_half = defect(eps / 2);
  if (rep.defect_eps == 0.0 && rep.defect_half == 0.0) {
    rep.exact = true;
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.ratio = rep.defect_half > 0.0 ? rep.defect_eps / rep.defect_half : std::numeric_limits<double>::infinity();
  rep.flagged = !(rep.ratio >= 3.2 && rep.ratio <= 4.8);
  return rep;
}

Expr riccati_f3_ode_residual(const Expr& f0, const Expr& f3, const Expr& eta, const Expr& b0, const Derivation& d) {
  try {
    Expr f3p = d(f3);
    Expr f3ppp = d(d(f3p));
    Expr f0ppp = d(d(d(f0)));
    Expr etap = d(eta);
    return f3ppp - (f0ppp + Expr(4) * b0 * eta + Expr(2) * etap * f0 - Expr(2) * etap * f3 - Expr(4) * eta * f3p);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OpaqueNoDerivative) throw;
    throw Error(ErrorKind::MissingDerivative, e.what());
  }
}

SymmetryCandidate aff_closed_form(const Expr& a, const Expr& b, const Rational& k, const Rational& c1,
                                  const Rational& c2, double t_end, Symbol time, std::size_t intervals) {
  if (!(t_end > 0.0)) throw Error(ErrorKind::BadParams, "t_end must be positive");
  if (intervals == 0) throw Error(ErrorKind::BadParams, "need at least one interval");
  std::vector<Symbol> slots{time};
  CompiledExpr ca(a, slots), cap(differentiate(a, time), slots), cb(b, slots);
  double kd = k.get_d();
  double c1d = c1.get_d();
  double c2d = c2.get_d();
  std::size_t fine = 2 * intervals;
  double hf = t_end / static_cast<double>(fine);
  auto at = [&](const CompiledExpr& f, double t) { return f(std::span<const double>(&t, 1)); };
  // B(t) = int_0^t b on the fine grid, Simpson per fine cell with its midpoint.
  std::vector<double> big_b(fine + 1, 0.0);
  for (std::size_t j = 0; j < fine; ++j) {
    double t = hf * static_cast<double>(j);
    big_b[j + 1] = big_b[j] + hf / 6.0 * (at(cb, t) + 4.0 * at(cb, t + hf / 2) + at(cb, t + hf));
  }
  auto integrand = [&](std::size_t j) {
    double t = hf * static_cast<double>(j);
    return (kd * at(cap, t) - at(ca, t) * (kd * at(cb, t) + c1d)) * std::exp(-big_b[j]);
  };
  Trajectory tab;
  tab.step = 2 * hf;
  tab.method = "simpson";
  double inner = 0.0;
  for (std::size_t m = 0; m <= intervals; ++m) {
    std::size_t j = 2 * m;
    if (m > 0) inner += 2 * hf / 6.0 * (integrand(j - 2) + 4.0 * integrand(j - 1) + integrand(j));
    double f1 = (inner + c2d) * std::exp(big_b[j]);
    if (!std::isfinite(f1) || std::abs(f1) > 1e12) {
      throw Error(ErrorKind::QuadratureDiverged, "quadrature for f1 diverged at t=" + std::to_string(hf * j));
    }
    tab.t.push_back(hf * static_cast<double>(j));
    tab.y.push_back({f1});
    tab.err.push_back(0.0);
  }
  Symbol s1("__aff_f1");
  Expr f2 = Expr(k) * b + Expr(c1);
  // df1/dt from the closed form: k a' - a f2 + b f1
  Expr gamma = Expr(k) * differentiate(a, time) - a * f2 + b * Expr(s1);
  SymmetryCandidate c;
  c.time = time;
  c.sampled = true;
  c.label = "aff_closed_form";
  c.f = {Expr(k), tabulated_state("aff_f1", tab, {gamma}, {s1}, time, 2)[0], f2};
  return c;
}

Expr function_bracket(const Expr& f, const Expr& g, Symbol time) {
  return f * differentiate(g, time) - g * differentiate(f, time);
}

SymmetryCandidate candidate_bracket(const SymmetryCandidate& a, const SymmetryCandidate& b, const StructureTensor& c) {
  std::size_t r = c.dim();
  if (a.f.size() != r + 1 || b.f.size() != r + 1) throw Error(ErrorKind::DimensionMismatch, "candidate size");
  SymmetryCandidate out;
  out.time = a.time;
  out.sampled = a.sampled || b.sampled;
  out.label = "[" + a.label + "," + b.label + "]";
  out.f.push_back(function_bracket(a.f[0], b.f[0], a.time));
  for (std::size_t al = 0; al < r; ++al) {
    Expr g = a.f[0] * differentiate(b.f[al + 1], a.time) - b.f[0] * differentiate(a.f[al + 1], a.time);
    for (std::size_t be = 0; be < r; ++be) {
      for (std::size_t ga = 0; ga < r; ++ga) {
        if (c(be, ga, al) != 0) g += Expr(c(be, ga, al)) * a.f[be + 1] * b.f[ga + 1];
      }
    }
    out.f.push_back(g);
  }
  return out;
}

AlgebraClosureReport symmetry_algebra_f0_zero(const LieSystemDef& sys, const std::vector<std::vector<double>>& initial,
                                              double t0, double t1, double step, std::size_t samples) {
  StructureTensor c = tensor_of(sys);
  std::size_t r = c.dim();
  if (initial.size() != r) throw Error(ErrorKind::DependentInitialConditions, "need r initial vectors");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    if (initial[i].size() != r) throw Error(ErrorKind::DimensionMismatch, "initial vector has wrong size");
    for (std::size_t j = 0; j < r; ++j) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = initial[i][j];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  lu.setThreshold(1e-10);
  if (lu.rank() < static_cast<Eigen::Index>(r)) {
    throw Error(ErrorKind::DependentInitialConditions, "initial vectors are linearly dependent");
  }
  auto bracket = [&](std::span<const double> x, std::span<const double> y) {
    std::vector<double> out(r, 0.0);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) {
        double xy = x[a] * y[b];
        if (xy == 0.0) continue;
        for (std::size_t g = 0; g < r; ++g) out[g] += xy * c(a, b, g).get_d();
      }
    }
    return out;
  };
  // Constants of the initial vectors: solve [v_i, v_j] = sum_k k_ijk v_k.
  AlgebraClosureReport rep;
  rep.initial_constants.assign(r * r * r, 0.0);
  Eigen::MatrixXd vt = v.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> solver(vt);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      auto w = bracket(initial[i], initial[j]);
      Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(r));
      Eigen::VectorXd k = solver.solve(rhs);
      for (std::size_t m = 0; m < r; ++m) rep.initial_constants[(i * r + j) * r + m] = k(static_cast<Eigen::Index>(m));
    }
  }
  std::vector<CompiledExpr> b;
  std::vector<Symbol> slots{sys.time};
  for (const auto& e : sys.coeffs) b.emplace_back(e, slots);
  RhsFn rhs = [&](double t, std::span<const double> f, std::span<double> df) {
    std::vector<double> bv(r);
    for (std::size_t a = 0; a < r; ++a) bv[a] = b[a](std::span<const double>(&t, 1));
    // df_a = sum_{b,g} b_b f_g c(g,b,a)
    auto w = bracket(f, bv);
    std::copy(w.begin(), w.end(), df.begin());
  };
  std::vector<Trajectory> sols;
  for (const auto& v0 : initial) sols.push_back(integrate_rk4(rhs, v0, t0, t1, step));
  std::size_t n = sols.front().t.size();
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t k = samples == 1 ? 0 : (n - 1) * s / (samples - 1);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        auto lhs = bracket(sols[i].y[k], sols[j].y[k]);
        for (std::size_t g = 0; g < r; ++g) {
          double rhs_v = 0.0;
          for (std::size_t m = 0; m < r; ++m) rhs_v += rep.initial_constants[(i * r + j) * r + m] * sols[m].y[k][g];
          rep.max_residual = std::max(rep.max_residual, std::abs(lhs[g] - rhs_v));
        }
        ++rep.brackets_checked;
      }
    }
  }
  return rep;
}

}  // namespace liesym
