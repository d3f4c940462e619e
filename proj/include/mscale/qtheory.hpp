#pragma once

#include <span>
#include <string>
#include <vector>

#include "mscale/expr.hpp"

namespace mscale {

/// Monotone single-coordinate profile ϱ(x).
///
/// identity:    ϱ = x
/// power:       ϱ = sign(x) ℓ |x/ℓ|^α                 (closed-form inverse)
/// multiscale:  ϱ = x + sign(x) (ℓ/α) |x/ℓ|^α          (ϱ' = 1 + |x/ℓ|^(α-1); numeric inverse)
/// expression:  closed form in the direction's coordinate on [lo, hi] (numeric inverse)
class CompositeProfile {
 public:
  enum class Kind { identity, power, multiscale, expression };

  CompositeProfile() = default;
  static CompositeProfile identity();
  static CompositeProfile power(double alpha, double length_scale);
  static CompositeProfile multiscale(double alpha, double length_scale);
  /// `direction` selects the variable of the expression (0 = t, i = x_i).
  static CompositeProfile expression(const std::string& text, int direction, double lo, double hi);

  Kind kind() const { return kind_; }
  double value(double x) const;
  double derivative(double x) const;
  /// x with ϱ(x) = rho; closed form or bisection + Newton polish to 1e-12.
  /// Throws InversionError outside the profile's range.
  double invert(double rho) const;

 private:
  double bracket_invert(double rho, double lo, double hi) const;

  Kind kind_ = Kind::identity;
  double alpha_ = 1.0;
  double length_ = 1.0;
  Expr expr_;
  int direction_ = 0;
  double lo_ = 0.0, hi_ = 0.0;
};

class CompositeCoordinates {
 public:
  explicit CompositeCoordinates(std::vector<CompositeProfile> profiles);

  int dimension() const { return static_cast<int>(profiles_.size()); }
  const CompositeProfile& profile(int mu) const { return profiles_.at(static_cast<std::size_t>(mu)); }

  std::vector<double> to_rho(std::span<const double> x) const;
  std::vector<double> to_x(std::span<const double> rho) const;
  /// dϱ^μ = ϱ'(x^μ) dx^μ
  std::vector<double> differential(std::span<const double> x, std::span<const double> dx) const;

 private:
  std::vector<CompositeProfile> profiles_;
};

struct QSample {
  double s = 0.0;
  std::vector<double> rho;
  std::vector<double> x;
  std::vector<double> drho_ds;
  std::vector<double> dx_ds;
};

struct QTrajectory {
  std::vector<QSample> samples;
};

/// Solves the time component of dϱ/ds from dϱ/ds · dϱ/ds = -1.
std::vector<double> q_normalized_velocity(std::span<const double> drho_spatial);

/// m ∂_s² ϱ = 0: ϱ(s) = ϱ(x0) + (s - s0) dϱ/ds, then per-direction inversion.
/// dϱ/ds must be normalized to 1e-10.
QTrajectory q_geodesic(const CompositeCoordinates& cc, std::span<const double> x0, std::span<const double> drho_ds,
                       double s0, double s1, std::size_t intervals);

/// ds_ϱ = √(-dϱ·dϱ); SignatureError unless timelike.
double q_line_element(const CompositeCoordinates& cc, std::span<const double> x, std::span<const double> dx);
double q_line_element_rho(std::span<const double> drho);

}  // namespace mscale
