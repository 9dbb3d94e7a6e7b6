#include "liesym/pdesys.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace liesym {

void validate(const PDELieSystemDef& sys) {
  if (sys.basis.empty()) throw Error(ErrorKind::DimensionMismatch, "PDE system without basis");
  if (sys.times.empty()) throw Error(ErrorKind::DimensionMismatch, "PDE system without times");
  if (sys.coeffs.size() != sys.basis.size()) throw Error(ErrorKind::DimensionMismatch, "need one coefficient row per field");
  for (const auto& row : sys.coeffs) {
    if (row.size() != sys.times.size()) throw Error(ErrorKind::DimensionMismatch, "need one coefficient per time");
  }
}

VectorField PDELieSystemDef::field(std::size_t l) const {
  VectorField out = VectorField::zero(vars());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (!coeffs[a][l].is_structurally_zero()) out = out + coeffs[a][l] * basis[a];
  }
  return out;
}

VectorField PDELieSystemDef::autonomized(std::size_t l) const {
  std::vector<Symbol> all = times;
  all.insert(all.end(), vars().begin(), vars().end());
  VectorField x = field(l);
  std::vector<Expr> comps(times.size());
  comps[l] = Expr(1);
  comps.insert(comps.end(), x.components().begin(), x.components().end());
  return VectorField(std::move(all), std::move(comps));
}

StructureTensor tensor_of(const PDELieSystemDef& sys) {
  return sys.tensor ? *sys.tensor : extract_structure_constants(sys.basis);
}

namespace {

Expr dt(const Expr& e, Symbol t) {
  try {
    return differentiate(e, t);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::OpaqueNoDerivative) throw;
    throw Error(ErrorKind::MissingDerivative, err.what());
  }
}

std::vector<std::vector<double>> lattice(const PDELieSystemDef& sys, std::size_t per_axis) {
  std::size_t s = sys.s();
  if (s > 3) throw Error(ErrorKind::BadParams, "lattice checks support at most three times");
  auto box = sys.time_box;
  if (box.size() != s) box.assign(s, {0.0, 1.0});
  std::vector<std::vector<double>> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < s; ++i) total *= per_axis;
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> p(s);
    std::size_t rest = n;
    for (std::size_t i = 0; i < s; ++i) {
      std::size_t k = rest % per_axis;
      rest /= per_axis;
      double u = per_axis == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(per_axis - 1);
      p[i] = box[i].first + u * (box[i].second - box[i].first);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Symbol> joined(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  std::vector<Symbol> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

std::vector<Expr> curvature_terms(const PDELieSystemDef& sys) {
  validate(sys);
  StructureTensor c = tensor_of(sys);
  std::size_t r = sys.rank();
  std::size_t s = sys.s();
  std::vector<Expr> out;
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t l = k + 1; l < s; ++l) {
      for (std::size_t g = 0; g < r; ++g) {
        Expr e = dt(sys.coeffs[g][k], sys.times[l]) - dt(sys.coeffs[g][l], sys.times[k]);
        for (std::size_t a = 0; a < r; ++a) {
          for (std::size_t b = 0; b < r; ++b) {
            if (c(a, b, g) != 0) e += Expr(c(a, b, g)) * sys.coeffs[a][l] * sys.coeffs[b][k];
          }
        }
        out.push_back(e);
      }
    }
  }
  return out;
}

CurvatureReport curvature_residual(const PDELieSystemDef& sys) {
  auto terms = curvature_terms(sys);
  CurvatureReport rep;
  bool opaque = std::any_of(terms.begin(), terms.end(), [](const Expr& e) { return e.has_opaque(); });
  if (!opaque) {
    rep.exact_zero = std::all_of(terms.begin(), terms.end(), [](const Expr& e) { return e.is_structurally_zero(); });
    if (rep.exact_zero) return rep;
  }
  auto pts = lattice(sys, 5);
  std::vector<CompiledExpr> compiled;
  for (const auto& e : terms) compiled.emplace_back(e, sys.times);
  for (const auto& p : pts) {
    for (const auto& ce : compiled) {
      double v = ce(p);
      rep.max_abs = std::max(rep.max_abs, std::isfinite(v) ? std::abs(v) : INFINITY);
    }
    ++rep.points;
  }
  return rep;
}

VectorField curvature_field(const PDELieSystemDef& sys, std::size_t k, std::size_t l) {
  VectorField xk = sys.field(k);
  VectorField xl = sys.field(l);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < xk.dim(); ++i) comps.push_back(dt(xl[i], sys.times[k]) - dt(xk[i], sys.times[l]));
  return VectorField(sys.vars(), std::move(comps)) + lie_bracket(xk, xl);
}

CurvatureReport field_curvature_residual(const PDELieSystemDef& sys, std::size_t nx, std::uint64_t seed) {
  validate(sys);
  std::vector<VectorField> fields;
  for (std::size_t k = 0; k < sys.s(); ++k) {
    for (std::size_t l = k + 1; l < sys.s(); ++l) fields.push_back(curvature_field(sys, k, l));
  }
  CurvatureReport rep;
  bool opaque = std::any_of(fields.begin(), fields.end(), [](const VectorField& f) { return f.has_opaque(); });
  if (!opaque) {
    rep.exact_zero = std::all_of(fields.begin(), fields.end(), [](const VectorField& f) { return f.is_zero(); });
    if (rep.exact_zero) return rep;
  }
  PDEGrid grid = make_pde_grid(sys, 5, nx, seed);
  std::vector<Symbol> slots = joined(sys.times, sys.vars());
  std::vector<CompiledExpr> compiled;
  for (const auto& f : fields) {
    for (const auto& e : f.components()) compiled.emplace_back(e, slots);
  }
  std::vector<double> buf(slots.size());
  for (const auto& t : grid.t) {
    for (const auto& x : grid.x) {
      std::copy(t.begin(), t.end(), buf.begin());
      std::copy(x.begin(), x.end(), buf.begin() + static_cast<std::ptrdiff_t>(t.size()));
      for (const auto& ce : compiled) {
        double v = ce(buf);
        rep.max_abs = std::max(rep.max_abs, std::isfinite(v) ? std::abs(v) : INFINITY);
      }
      ++rep.points;
    }
  }
  return rep;
}

PDELieSystemDef build_pde_symmetry_system(const PDELieSystemDef& sys, double tol) {
  CurvatureReport curv = curvature_residual(sys);
  if (!curv.integrable(tol)) {
    throw Error(ErrorKind::NotIntegrable, "curvature residual " + std::to_string(curv.max_abs) + " exceeds tolerance");
  }
  StructureTensor c = tensor_of(sys);
  SymmetryBasis sb = symmetry_system_basis(c);
  std::vector<Symbol> f(sb.f.begin() + 1, sb.f.end());
  PDELieSystemDef out;
  out.times = sys.times;
  for (const auto& y : sb.y) {
    std::vector<Expr> comps(y.components().begin() + 1, y.components().end());
    out.basis.emplace_back(f, std::move(comps));
  }
  out.tensor = c;
  out.coeffs = sys.coeffs;
  out.time_box = sys.time_box;
  out.sample_box.assign(f.size(), {-1.0, 1.0});
  out.label = sys.label.empty() ? "symmetry system" : sys.label + " symmetry system";
  return out;
}

namespace {

struct CompiledPDE {
  std::size_t s = 0;
  std::size_t n = 0;
  std::vector<std::vector<CompiledExpr>> fields;  // fields[l][i]

  explicit CompiledPDE(const PDELieSystemDef& sys) : s(sys.s()), n(sys.vars().size()) {
    std::vector<Symbol> slots = joined(sys.times, sys.vars());
    for (std::size_t l = 0; l < s; ++l) {
      std::vector<CompiledExpr> row;
      VectorField x = sys.field(l);
      for (const auto& e : x.components()) row.emplace_back(e, slots);
      fields.push_back(std::move(row));
    }
  }

  void eval(std::size_t l, std::span<const double> t, std::span<const double> x, std::span<double> out) const {
    std::vector<double> buf(t.begin(), t.end());
    buf.insert(buf.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) out[i] = fields[l][i](buf);
  }
};

Trajectory run_path(const CompiledPDE& pde, std::vector<double> x0, const TimePath& path, const IntegratorOptions& opts) {
  if (path.waypoints.size() < 2) throw Error(ErrorKind::BadParams, "path needs at least two waypoints");
  if (path.steps == 0) throw Error(ErrorKind::StepNotPositive, "path needs a positive step count");
  for (const auto& w : path.waypoints) {
    if (w.size() != pde.s) throw Error(ErrorKind::DimensionMismatch, "waypoint has wrong dimension");
  }
  if (x0.size() != pde.n) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong dimension");
  Trajectory out;
  out.t.push_back(0.0);
  out.y.push_back(x0);
  out.err.push_back(0.0);
  out.step = 1.0 / static_cast<double>(path.steps);
  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const auto& p = path.waypoints[seg];
    const auto& q = path.waypoints[seg + 1];
    if (p == q) throw Error(ErrorKind::BadParams, "consecutive waypoints coincide");
    std::vector<double> dir(pde.s);
    for (std::size_t l = 0; l < pde.s; ++l) dir[l] = q[l] - p[l];
    RhsFn rhs = [&pde, p, dir](double tau, std::span<const double> x, std::span<double> dx) {
      std::vector<double> t(p.size());
      for (std::size_t l = 0; l < t.size(); ++l) t[l] = p[l] + tau * dir[l];
      std::vector<double> tmp(dx.size());
      std::fill(dx.begin(), dx.end(), 0.0);
      for (std::size_t l = 0; l < t.size(); ++l) {
        if (dir[l] == 0.0) continue;
        pde.eval(l, t, x, tmp);
        for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dir[l] * tmp[i];
      }
    };
    Trajectory part = integrate_rk4(rhs, out.y.back(), 0.0, 1.0, out.step, opts);
    for (std::size_t k = 1; k < part.size(); ++k) {
      out.t.push_back(static_cast<double>(seg) + part.t[k]);
      out.y.push_back(part.y[k]);
      out.err.push_back(part.err[k]);
    }
  }
  return out;
}

}  // namespace

Trajectory integrate_along_path(const PDELieSystemDef& sys, std::vector<double> x0, const TimePath& path,
                                IntegratorOptions opts) {
  validate(sys);
  CompiledPDE pde(sys);
  return run_path(pde, std::move(x0), path, opts);
}

PDEGrid make_pde_grid(const PDELieSystemDef& sys, std::size_t per_axis, std::size_t nx, std::uint64_t seed) {
  PDEGrid g;
  g.t = lattice(sys, per_axis);
  std::mt19937_64 rng(seed);
  std::size_t n = sys.vars().size();
  auto box = sys.sample_box;
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

VectorField pde_candidate_field(const std::vector<Expr>& f, const PDELieSystemDef& sys) {
  if (f.size() != sys.rank()) throw Error(ErrorKind::DimensionMismatch, "candidate needs f_1..f_r");
  VectorField out = VectorField::zero(sys.vars());
  for (std::size_t b = 0; b < f.size(); ++b) {
    if (!f[b].is_structurally_zero()) out = out + f[b] * sys.basis[b];
  }
  return out;
}

PDESymmetryReport pde_symmetry_residual(const VectorField& y, const PDELieSystemDef& sys, const PDEGrid& grid) {
  validate(sys);
  if (grid.t.empty() || grid.x.empty()) throw Error(ErrorKind::GridEmpty, "PDE grid has no points");
  std::vector<Symbol> all = joined(sys.times, sys.vars());
  // bring y onto (times, x); prolong_first rejects d/dt_l components
  VectorField ye = y.vars() == sys.vars() ? y.embed(all) : y;
  if (ye.vars() != all) throw Error(ErrorKind::DimensionMismatch, "candidate lives on the wrong variables");
  JetVectorField jet = prolong_first(ye, sys.times);
  const JetSpace& js = jet.space;

  std::vector<Expr> bracket_terms, jet_terms;
  for (std::size_t l = 0; l < sys.s(); ++l) {
    VectorField xbar = sys.autonomized(l);
    VectorField br = lie_bracket(xbar, ye);
    VectorField xl = sys.field(l);
    std::vector<Symbol> coords = js.coordinates();
    for (std::size_t i = 0; i < xl.dim(); ++i) {
      Expr f = Expr(js.jets[i][l]) - xl[i];
      Expr yf = jet.field.apply(f);
      for (std::size_t j = 0; j < js.deps.size(); ++j) {
        for (std::size_t q = 0; q < sys.s(); ++q) {
          if (yf.depends_on(js.jets[j][q])) yf = substitute(yf, js.jets[j][q], sys.field(q)[j]);
        }
      }
      bracket_terms.push_back(br[sys.s() + i]);
      jet_terms.push_back(yf);
    }
  }
  PDESymmetryReport rep;
  auto symbolic_zero = [](const std::vector<Expr>& v) {
    return std::all_of(v.begin(), v.end(), [](const Expr& e) { return !e.has_opaque() && e.is_structurally_zero(); });
  };
  if (symbolic_zero(bracket_terms) && symbolic_zero(jet_terms)) {
    rep.exact_zero = true;
    rep.points = grid.t.size() * grid.x.size();
    return rep;
  }
  std::vector<CompiledExpr> cb, cj;
  for (const auto& e : bracket_terms) cb.emplace_back(e, all);
  for (const auto& e : jet_terms) cj.emplace_back(e, all);
  std::vector<double> buf(all.size());
  for (const auto& t : grid.t) {
    for (const auto& x : grid.x) {
      std::copy(t.begin(), t.end(), buf.begin());
      std::copy(x.begin(), x.end(), buf.begin() + static_cast<std::ptrdiff_t>(t.size()));
      for (std::size_t k = 0; k < cb.size(); ++k) {
        double b = cb[k](buf);
        double j = cj[k](buf);
        rep.bracket_max = std::max(rep.bracket_max, std::abs(b));
        rep.jet_max = std::max(rep.jet_max, std::abs(j));
        rep.agreement = std::max(rep.agreement, std::abs(b - j));
      }
      ++rep.points;
    }
  }
  return rep;
}

namespace {

// Memoized L-path solution of a symmetry system; shared by the leaves of one
// sampled candidate.
struct PathSolver {
  CompiledPDE pde;
  std::vector<double> base;
  std::vector<double> f0;
  double step;
  std::mutex mu;
  std::map<std::vector<double>, std::vector<double>> cache;

  PathSolver(const PDELieSystemDef& sys, std::vector<double> b, std::vector<double> f, double h)
      : pde(sys), base(std::move(b)), f0(std::move(f)), step(h) {}

  std::vector<double> value(std::span<const double> t) {
    std::vector<double> key(t.begin(), t.end());
    {
      std::lock_guard lock(mu);
      if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    std::vector<double> y = f0;
    std::vector<double> cur = base;
    for (std::size_t l = 0; l < pde.s; ++l) {
      if (key[l] == cur[l]) continue;
      std::vector<double> next = cur;
      next[l] = key[l];
      TimePath seg{{cur, next}, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(key[l] - cur[l]) / step)))};
      y = run_path(pde, y, seg, {}).y.back();
      cur = next;
    }
    std::lock_guard lock(mu);
    cache.emplace(key, y);
    return y;
  }
};

}  // namespace

std::vector<Expr> sampled_pde_candidate(const PDELieSystemDef& symmetry_system, std::vector<double> base,
                                        std::vector<double> f_init, double step) {
  validate(symmetry_system);
  std::size_t s = symmetry_system.s();
  std::size_t r = symmetry_system.vars().size();
  if (base.size() != s || f_init.size() != r) throw Error(ErrorKind::DimensionMismatch, "base point or f_init size");
  if (!(step > 0.0)) throw Error(ErrorKind::StepNotPositive, "step must be positive");
  auto solver = std::make_shared<PathSolver>(symmetry_system, std::move(base), std::move(f_init), step);
  static std::atomic<unsigned> counter{0};
  std::string stem = "F#" + std::to_string(counter.fetch_add(1));
  std::vector<Expr> args;
  for (Symbol t : symmetry_system.times) args.emplace_back(t);
  std::vector<Expr> out;
  for (std::size_t b = 0; b < r; ++b) {
    auto fn = std::make_shared<OpaqueFunction>();
    fn->name = stem + "_" + symmetry_system.vars()[b].name();
    fn->arity = s;
    fn->max_order = 1;
    fn->evaluate = [solver, b, s, r](std::span<const int> orders, std::span<const double> t) {
      std::vector<double> f = solver->value(t);
      int total = 0;
      std::size_t dir = 0;
      for (std::size_t l = 0; l < s; ++l) {
        total += orders[l];
        if (orders[l]) dir = l;
      }
      if (total == 0) return f[b];
      if (total > 1) throw Error(ErrorKind::OpaqueNoDerivative, "sampled candidate has first partials only");
      std::vector<double> df(r);
      solver->pde.eval(dir, t, f, df);
      return df[b];
    };
    out.push_back(Expr::apply(fn, args));
  }
  return out;
}

}  // namespace liesym
