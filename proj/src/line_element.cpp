#include "mscale/line_element.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

double ds_isotropic_explicit(const LineElementInput& in) {
  if (in.x.size() != in.dx.size()) throw std::invalid_argument("line element: x and dx differ in dimension");
  if (!(in.omega > 0.0)) throw SingularityError("line element: action weight must be positive");
  const double big_omega = in.log_derivative;
  const double xx = minkowski_dot<double>(in.x, in.x);
  const double xdx = minkowski_dot<double>(in.x, in.dx);
  const double dxdx = minkowski_dot<double>(in.dx, in.dx);

  // a ds² + b ds + c = 0 after multiplying the implicit definition by 4/ω.
  const double a = 4.0 / in.omega + big_omega * big_omega * xx;
  const double b = 4.0 * big_omega * xdx;
  const double c = 4.0 * dxdx;

  if (!(c < 0.0)) {
    std::ostringstream msg;
    msg << "line element: displacement is not timelike (dx.dx = " << dxdx << ")";
    throw SignatureError(msg.str());
  }
  if (!(a > 1e-14 * (4.0 / in.omega))) {
    std::ostringstream msg;
    msg << "line element: 4/omega + Omega^2 x.x = " << a << " is not positive";
    throw DegenerateGeometryError(msg.str());
  }
  const double disc = b * b - 4.0 * a * c;  // > 0 since a > 0, c < 0
  if (!(disc >= 0.0)) throw SignatureError("line element: negative radicand");
  const double root = std::sqrt(disc);
  // Positive root, written so neither branch subtracts nearly equal numbers.
  if (b >= 0.0) {
    const double q = -0.5 * (b + root);
    return c / q;
  }
  const double q = 0.5 * (-b + root);
  return q / a;
}

double ds_isotropic_implicit_residual(const LineElementInput& in, double ds) {
  const std::size_t d = in.x.size();
  double sq = 0.0;
  for (std::size_t mu = 0; mu < d; ++mu) {
    const double dw = in.dx[mu] + 0.5 * in.log_derivative * in.x[mu] * ds;
    sq += eta(static_cast<int>(mu)) * dw * dw;
  }
  return ds * ds + in.omega * sq;
}

namespace {

double lorentz_radicand(std::span<const double> velocity, double v0) {
  if (!(v0 > 0.0)) throw SingularityError("time weight must be positive");
  double v2 = 0.0;
  for (double v : velocity) v2 += v * v;
  const double r = 1.0 - v0 * v2;
  if (!(r > 0.0)) {
    std::ostringstream msg;
    msg << "superluminal input: 1 - v0*vel^2 = " << r;
    throw SignatureError(msg.str());
  }
  return r;
}

}  // namespace

double ds_anisotropic(double dt, std::span<const double> velocity, double v0) {
  return dt * std::sqrt(lorentz_radicand(velocity, v0));
}

double gamma_factor(std::span<const double> velocity, double v0) {
  return 1.0 / std::sqrt(lorentz_radicand(velocity, v0));
}

}  // namespace mscale
