#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mscale {

/// dy/ds = f(s, y)
using OdeRhs = std::function<void(double s, std::span<const double> y, std::span<double> dyds)>;

struct StepControl {
  double step = 1e-3;
  bool adaptive = false;
  /// Local error target of the step-doubling controller (mixed abs/rel).
  double tolerance = 1e-10;
  double min_step = 1e-9;
  double max_step = 0.1;
};

/// One classical 4th-order Runge–Kutta step.
void rk4_step(const OdeRhs& f, double s, std::span<const double> y, double h, std::span<double> out);

/// Called on every accepted sample, including the initial one. Returning
/// false stops the integration.
using OdeObserver = std::function<bool(double s, std::span<const double> y)>;

/// Integrates from s0 to s1 (s1 > s0). Fixed mode uses n = ceil((s1-s0)/step)
/// equal steps so the last sample lands exactly on s1; adaptive mode uses
/// step doubling with the error estimate |y_h/2 - y_h| / 15.
/// Returns the number of accepted steps.
std::size_t integrate_ode(const OdeRhs& f, double s0, double s1, std::vector<double> y0, const StepControl& control,
                          const OdeObserver& observe);

}  // namespace mscale
