#pragma once

#include <span>

namespace mscale {

struct LineElementInput {
  std::span<const double> x;
  std::span<const double> dx;
  double omega = 1.0;
  /// ∂_s ω / ω at the current s.
  double log_derivative = 0.0;
};

/// Explicit isotropic ds: the positive root of
///   ds² = -ω (dx + (Ω/2) x ds)·(dx + (Ω/2) x ds).
/// Throws SignatureError for null/spacelike dx and DegenerateGeometryError
/// when 4/ω + Ω² x·x is not positive.
double ds_isotropic_explicit(const LineElementInput& in);

/// ds² + ω (dx + (Ω/2) x ds)² for a candidate ds (test oracle, never solved).
double ds_isotropic_implicit_residual(const LineElementInput& in, double ds);

/// dt·√(1 - v0 Σ vel²); vel are the spatial weighted velocities vD_t x^i.
double ds_anisotropic(double dt, std::span<const double> velocity, double v0);
double gamma_factor(std::span<const double> velocity, double v0);

}  // namespace mscale
