#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mscale/dual.hpp"
#include "mscale/errors.hpp"

namespace mscale {

enum class ProfileKind { constant, power_law, binomial };

/// One term |x/ℓ|^(α-1) of a multiscale weight.
struct ScaleTerm {
  double alpha = 1.0;
  double length_scale = 1.0;
};

/// Single-coordinate measure weight v_μ(x^μ).
///
/// constant:  v = 1
/// power_law: v = |x/ℓ|^(α-1)
/// binomial:  v = 1 + Σ_n |x/ℓ_n|^(α_n-1)   (one term is the usual binomial measure)
///
/// Profiles with a term α < 1 are singular at the origin; evaluations with
/// |x| < ε (or x = 0) throw SingularityError instead of producing inf/NaN.
class WeightProfile {
 public:
  WeightProfile() = default;

  static WeightProfile constant();
  static WeightProfile power_law(double alpha, double length_scale, double epsilon = 0.0);
  static WeightProfile binomial(double alpha, double length_scale, double epsilon = 0.0);
  static WeightProfile multiscale(std::vector<ScaleTerm> terms, double epsilon = 0.0);

  ProfileKind kind() const { return kind_; }
  const std::vector<ScaleTerm>& terms() const { return terms_; }
  double epsilon() const { return epsilon_; }
  bool is_trivial() const { return kind_ == ProfileKind::constant; }
  bool is_singular_at_origin() const;

  void check_domain(double x) const;

  template <class T>
  T value(const T& x) const;

  /// d/dx ln √v(x), from the closed-form derivative.
  template <class T>
  T sqrt_log_derivative(const T& x) const;

 private:
  ProfileKind kind_ = ProfileKind::constant;
  std::vector<ScaleTerm> terms_;
  double epsilon_ = 0.0;
};

/// Factorized spacetime weight v(x) = Π_μ v_μ(x^μ), index 0 = time,
/// signature diag(-, +, ..., +).
class MeasureWeight {
 public:
  MeasureWeight() = default;
  explicit MeasureWeight(std::vector<WeightProfile> profiles);
  static MeasureWeight trivial(int dimension);

  int dimension() const { return static_cast<int>(profiles_.size()); }
  const WeightProfile& profile(int mu) const { return profiles_.at(static_cast<std::size_t>(mu)); }
  const std::vector<WeightProfile>& profiles() const { return profiles_; }

  bool is_trivial() const;
  /// v0 ≡ 1: multiscale only along spatial directions.
  bool time_is_trivial() const { return profiles_.at(0).is_trivial(); }

  template <class T>
  T value(std::span<const T> x) const {
    T v(1.0);
    for (int mu = 0; mu < dimension(); ++mu) v = v * profiles_[mu].value(x[mu]);
    return v;
  }

  /// Product over spatial coordinates only; x holds D-1 spatial components.
  template <class T>
  T spatial_value(std::span<const T> x_spatial) const {
    T v(1.0);
    for (int i = 1; i < dimension(); ++i) v = v * profiles_[i].value(x_spatial[i - 1]);
    return v;
  }

  template <class T>
  T sqrt_log_derivative(int mu, std::span<const T> x) const {
    return profiles_[mu].sqrt_log_derivative(x[mu]);
  }

 private:
  std::vector<WeightProfile> profiles_;
};

double eval_weight(const MeasureWeight& mw, std::span<const double> x);
double eval_sqrt_weight_log_derivative(const MeasureWeight& mw, int mu, std::span<const double> x);

/// Gaussian-mollified multiscale spatial delta
///   δ_v(x, x0) = Π_i G_σ(x^i - x0^i) / √(v_i(x^i) v_i(x0^i)).
class SmoothedDelta {
 public:
  SmoothedDelta(std::vector<double> center, double sigma, MeasureWeight mw);

  double operator()(std::span<const double> x_spatial) const;

  const std::vector<double>& center() const { return center_; }
  double sigma() const { return sigma_; }
  const MeasureWeight& measure() const { return mw_; }

 private:
  std::vector<double> center_;
  double sigma_;
  MeasureWeight mw_;
  double center_weight_;
};

double delta_v_eval(const SmoothedDelta& d, std::span<const double> x_spatial);

double gaussian_kernel(double y, double sigma);

// ---------------------------------------------------------------------------

template <class T>
T WeightProfile::value(const T& x) const {
  using std::abs;
  using std::pow;
  if (kind_ == ProfileKind::constant) return T(1.0);
  check_domain(value_of(x));
  T v(kind_ == ProfileKind::binomial ? 1.0 : 0.0);
  for (const auto& term : terms_) v = v + pow(abs(x / term.length_scale), term.alpha - 1.0);
  return v;
}

template <class T>
T WeightProfile::sqrt_log_derivative(const T& x) const {
  using std::abs;
  using std::pow;
  if (kind_ == ProfileKind::constant) return T(0.0);
  check_domain(value_of(x));
  if (kind_ == ProfileKind::power_law) {
    if (terms_[0].alpha == 1.0) return T(0.0);
    return T(0.5 * (terms_[0].alpha - 1.0)) / x;
  }
  // v' = Σ (α-1)/x · |x/ℓ|^(α-1)
  T v(1.0);
  T dv(0.0);
  for (const auto& term : terms_) {
    T p = pow(abs(x / term.length_scale), term.alpha - 1.0);
    v = v + p;
    if (term.alpha != 1.0) dv = dv + T(term.alpha - 1.0) * p / x;
  }
  return T(0.5) * dv / v;
}

}  // namespace mscale
