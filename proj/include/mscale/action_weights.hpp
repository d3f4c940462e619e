#pragma once

#include <string>
#include <vector>

#include "mscale/dual.hpp"
#include "mscale/expr.hpp"

namespace mscale {

/// Positive worldline weight ω(s), stored as a closed-form expression in s.
class ActionProfile {
 public:
  ActionProfile() : ActionProfile(Expr::constant(1.0)) {}
  explicit ActionProfile(Expr expr);

  static ActionProfile constant(double c = 1.0);
  static ActionProfile from_expression(const std::string& text);
  /// (a + b s)^p
  static ActionProfile shifted_power(double a, double b, double p);
  /// exp(k s)
  static ActionProfile exponential(double rate);
  /// 1 + |(s + offset)/ℓ|^(α-1)
  static ActionProfile binomial(double alpha, double length_scale, double offset);

  template <class T>
  T value(const T& s) const {
    return expr_.eval_at(Var::s, s);
  }

  /// ω(s); throws SingularityError if the weight is not strictly positive and finite.
  double at(double s) const;
  /// Ω(s) = ∂_s ω / ω.
  double log_derivative(double s) const;

  bool is_trivial() const { return trivial_; }
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
  bool trivial_ = false;
};

/// The worldline weights ω_μ(s) of the weighted differential d_ω and the
/// overall action weight ω̃(s).
class ActionWeights {
 public:
  ActionWeights() = default;

  static ActionWeights isotropic(int dimension, ActionProfile omega);
  static ActionWeights anisotropic(std::vector<ActionProfile> omegas);
  static ActionWeights trivial(int dimension) { return isotropic(dimension, ActionProfile::constant()); }

  /// Replaces ω̃. A non-constant ω̃ is only admitted in exploration mode, in
  /// which the mass-shell invariant is no longer checked.
  ActionWeights with_tilde(ActionProfile tilde, bool explore) const;

  int dimension() const { return static_cast<int>(omegas_.size()); }
  bool isotropic() const { return isotropic_; }
  bool explore() const { return explore_; }
  bool is_trivial() const;

  const ActionProfile& direction(int mu) const { return omegas_.at(static_cast<std::size_t>(mu)); }
  const ActionProfile& tilde() const { return tilde_; }

  double omega(int mu, double s) const { return omegas_[mu].at(s); }
  double log_derivative(int mu, double s) const { return omegas_[mu].log_derivative(s); }

 private:
  std::vector<ActionProfile> omegas_;
  ActionProfile tilde_;
  bool isotropic_ = true;
  bool explore_ = false;
};

}  // namespace mscale
