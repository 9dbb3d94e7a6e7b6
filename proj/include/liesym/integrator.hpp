#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "liesym/error.hpp"

namespace liesym {

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct IntegratorOptions {
  double pole_threshold = 1e12;
  // Abort when the per-step Richardson estimate exceeds this fraction of
  // max(1, |y|); catches finite-time blow-up before the RHS overflows.
  double blowup_rel_error = 1e-3;
  // Optional excluded locus; returning true aborts with PoleEncountered.
  std::function<bool(double t, std::span<const double> y)> excluded;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  std::vector<double> err;  // Richardson estimate of the step ending at t[k]
  double step = 0.0;
  std::string method = "rk4";

  std::size_t size() const { return t.size(); }
  const std::vector<double>& back() const { return y.back(); }
};

// Classical RK4 on a uniform grid of ceil(|t1-t0|/step) intervals. Each step
// is also taken as two half steps; |y_full - y_half|/15 is stored as err.
Trajectory integrate_rk4(const RhsFn& rhs, std::vector<double> y0, double t0, double t1, double step,
                         const IntegratorOptions& opts = {});

// Cubic Hermite interpolation of a trajectory using rhs as node derivative.
std::vector<double> interpolate(const Trajectory& traj, const RhsFn& rhs, double t);

}  // namespace liesym
