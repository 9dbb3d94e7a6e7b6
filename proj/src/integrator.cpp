#include "liesym/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liesym {
namespace {

struct Stepper {
  const RhsFn& rhs;
  std::size_t n;
  std::vector<double> k1, k2, k3, k4, tmp;

  Stepper(const RhsFn& f, std::size_t dim) : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}

  void step(double t, const std::vector<double>& y, double h, std::vector<double>& out) {
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
};

[[noreturn]] void pole(double t, const std::string& why) {
  std::ostringstream os;
  os.precision(17);
  os << why << " near t=" << t;
  throw Error(ErrorKind::PoleEncountered, os.str());
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> y0, double t0, double t1, double step,
                         const IntegratorOptions& opts) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorKind::StepNotPositive, "step must be positive");
  double span = t1 - t0;
  std::size_t count = span == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(std::abs(span) / step - 1e-9));
  double h = count ? span / static_cast<double>(count) : 0.0;
  std::size_t n = y0.size();
  Trajectory out;
  out.step = std::abs(h);
  out.t.push_back(t0);
  out.y.push_back(y0);
  out.err.push_back(0.0);
  Stepper st(rhs, n);
  std::vector<double> dy(n), full, half, mid;
  auto guard = [&](double t, const std::vector<double>& y) {
    try {
      rhs(t, y, dy);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DivisionByZero) pole(t, "right-hand side is singular");
      throw;
    }
    for (double v : y) {
      if (!std::isfinite(v)) pole(t, "state is not finite");
    }
    for (double v : dy) {
      if (!std::isfinite(v) || std::abs(v) > opts.pole_threshold) pole(t, "right-hand side exceeds threshold");
    }
    if (opts.excluded && opts.excluded(t, y)) pole(t, "state entered the excluded locus");
  };
  guard(t0, y0);
  std::vector<double> y = std::move(y0);
  for (std::size_t k = 0; k < count; ++k) {
    double t = t0 + h * static_cast<double>(k);
    try {
      st.step(t, y, h, full);
      st.step(t, y, 0.5 * h, mid);
      st.step(t + 0.5 * h, mid, 0.5 * h, half);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DivisionByZero) pole(t, "right-hand side is singular");
      throw;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(full[i] - half[i]) / 15.0);
    double tn = (k + 1 == count) ? t1 : t0 + h * static_cast<double>(k + 1);
    if (!std::isfinite(err) || err > opts.blowup_rel_error * std::max(1.0, inf_norm(full))) {
      pole(tn, "step error estimate indicates blow-up");
    }
    guard(tn, full);
    y = full;
    out.t.push_back(tn);
    out.y.push_back(y);
    out.err.push_back(err);
  }
  return out;
}

std::vector<double> interpolate(const Trajectory& traj, const RhsFn& rhs, double t) {
  const auto& g = traj.t;
  if (g.empty()) throw Error(ErrorKind::GridEmpty, "empty trajectory");
  double lo = std::min(g.front(), g.back());
  double hi = std::max(g.front(), g.back());
  double slack = 1e-9 * std::max(1.0, hi - lo);
  if (t < lo - slack || t > hi + slack) {
    std::ostringstream os;
    os << "t=" << t << " outside the trajectory range [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::TransportLeftDomain, os.str());
  }
  if (g.size() == 1) return traj.y.front();
  bool ascending = g.back() > g.front();
  std::size_t k;
  if (ascending) {
    k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), t) - g.begin());
  } else {
    k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), t, std::greater<>()) - g.begin());
  }
  k = std::clamp<std::size_t>(k, 1, g.size() - 1);
  std::size_t j = k - 1;
  double h = g[k] - g[j];
  double s = (t - g[j]) / h;
  if (std::abs(s) < 1e-12) return traj.y[j];
  if (std::abs(s - 1.0) < 1e-12) return traj.y[k];
  std::size_t n = traj.y[j].size();
  std::vector<double> d0(n), d1(n), out(n);
  rhs(g[j], traj.y[j], d0);
  rhs(g[k], traj.y[k], d1);
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = h00 * traj.y[j][i] + h10 * h * d0[i] + h01 * traj.y[k][i] + h11 * h * d1[i];
  }
  return out;
}

}  // namespace liesym
