#include "mscale/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mscale {

void rk4_step(const OdeRhs& f, double s, std::span<const double> y, double h, std::span<double> out) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  f(s, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  f(s + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  f(s + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  f(s + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

namespace {

std::size_t integrate_fixed(const OdeRhs& f, double s0, double s1, std::vector<double> y, double step,
                            const OdeObserver& observe) {
  const double span = s1 - s0;
  auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  n = std::max<std::size_t>(n, 1);
  const double h = span / static_cast<double>(n);
  std::vector<double> next(y.size());
  if (!observe(s0, y)) return 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s0 + static_cast<double>(k) * h;
    rk4_step(f, s, y, h, next);
    y.swap(next);
    const double s_next = (k + 1 == n) ? s1 : s0 + static_cast<double>(k + 1) * h;
    if (!observe(s_next, y)) return k + 1;
  }
  return n;
}

std::size_t integrate_adaptive(const OdeRhs& f, double s0, double s1, std::vector<double> y,
                               const StepControl& c, const OdeObserver& observe) {
  const std::size_t n = y.size();
  std::vector<double> full(n), half(n), two_half(n);
  double s = s0;
  double h = std::clamp(c.step, c.min_step, c.max_step);
  std::size_t accepted = 0;
  if (!observe(s, y)) return 0;
  while (s < s1) {
    bool last = false;
    if (s + h >= s1) {
      h = s1 - s;
      last = true;
    }
    rk4_step(f, s, y, h, full);
    rk4_step(f, s, y, 0.5 * h, half);
    rk4_step(f, s + 0.5 * h, half, 0.5 * h, two_half);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(two_half[i]));
      err = std::max(err, std::abs(two_half[i] - full[i]) / 15.0 / scale);
    }
    if (!std::isfinite(err)) err = 1e300;

    if (err <= c.tolerance || h <= c.min_step * (1.0 + 1e-12)) {
      s = last ? s1 : s + h;
      y.swap(two_half);
      ++accepted;
      if (!observe(s, y)) return accepted;
      if (last) break;
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(c.tolerance / err, 0.2) : 4.0;
    h = std::clamp(h * std::clamp(factor, 0.1, 4.0), c.min_step, c.max_step);
  }
  return accepted;
}

}  // namespace

std::size_t integrate_ode(const OdeRhs& f, double s0, double s1, std::vector<double> y0, const StepControl& control,
                          const OdeObserver& observe) {
  if (!(s1 > s0)) throw std::invalid_argument("integration span must have s1 > s0");
  if (!(control.step > 0.0)) throw std::invalid_argument("step must be positive");
  if (control.adaptive) {
    if (!(control.tolerance > 0.0) || !(control.min_step > 0.0) || !(control.max_step >= control.min_step))
      throw std::invalid_argument("adaptive step control is inconsistent");
    return integrate_adaptive(f, s0, s1, std::move(y0), control, observe);
  }
  return integrate_fixed(f, s0, s1, std::move(y0), control.step, observe);
}

}  // namespace mscale
