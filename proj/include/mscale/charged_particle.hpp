#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mscale/action_weights.hpp"
#include "mscale/dual.hpp"
#include "mscale/expr.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/measure.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

/// Covariant potential A_μ(x) given by closed-form components, plus the
/// spacetime weight entering its weighted derivatives.
class GaugeField {
 public:
  enum class Preset { custom, uniform_E, uniform_B };

  GaugeField() = default;
  GaugeField(std::vector<Expr> components, MeasureWeight mw);

  /// A_0 = E·x^axis, so F_{axis,0} = E and a positive charge accelerates toward +x^axis.
  static GaugeField uniform_E(MeasureWeight mw, double E, int axis = 1);
  /// A_1 = -B x²/2, A_2 = B x¹/2 (needs D ≥ 3), so F_12 = B.
  static GaugeField uniform_B(MeasureWeight mw, double B);

  int dimension() const { return static_cast<int>(components_.size()); }
  const MeasureWeight& measure() const { return mw_; }
  const std::vector<Expr>& components() const { return components_; }
  Preset preset() const { return preset_; }
  double preset_strength() const { return strength_; }
  int preset_axis() const { return axis_; }

  template <class T>
  T potential(int nu, std::span<const T> x) const {
    return components_[nu].eval(vars(x));
  }

  /// F_μν = 𝒟_μ A_ν - 𝒟_ν A_μ, row-major D×D. Generic over the scalar type so
  /// derivatives of F come from nesting duals.
  template <class T>
  std::vector<T> field_strength(std::span<const T> x) const;

  /// ℱ_μν = ∂_μ(√v A_ν) - ∂_ν(√v A_μ), from the literal product.
  std::vector<double> integer_picture_field_strength(std::span<const double> x) const;

 private:
  template <class T>
  static VarArray<T> vars(std::span<const T> x) {
    VarArray<T> v;
    v.fill(T(0.0));
    for (std::size_t mu = 0; mu < x.size() && mu < 4; ++mu) v[mu] = x[mu];
    return v;
  }

  std::vector<Expr> components_;
  MeasureWeight mw_;
  Preset preset_ = Preset::custom;
  double strength_ = 0.0;
  int axis_ = 1;
};

Matrix field_strength(const GaugeField& field, std::span<const double> x);

struct ChargedParticleSpec {
  double mass = 1.0;
  double charge = 1.0;  // e₀
  WorldlineState initial;
};

/// ẽ(x) = e₀ √v(x)
double effective_charge(double e0, const MeasureWeight& mw, std::span<const double> x);

/// Throws CompatibilityError unless v₀ ≡ 1 and every action weight is trivial.
void check_compatibility(const MeasureWeight& mw, const ActionWeights& w);

/// dx^μ/ds = u^μ,  m du_μ/ds = ẽ u^ν F_μν.
PhaseDerivative lorentz_rhs(const WorldlineState& st, const ChargedParticleSpec& spec, const GaugeField& field);

struct ChargedTrajectory {
  Trajectory trajectory;
  /// max_μ |m du_μ/ds - ẽ u^ν F_μν| with du/ds from 4th-order differences of the samples.
  std::vector<double> eom_residual;

  double max_eom_residual() const;
};

/// Closed-form motion for the uniform presets with v ≡ 1; nullopt otherwise.
std::optional<WorldlineState> charged_closed_form(const ChargedParticleSpec& spec, const GaugeField& field, double s);

ChargedTrajectory integrate_charged(const ChargedParticleSpec& spec, const GaugeField& field,
                                    const ActionWeights& weights, double s_end, const IntegrateOptions& opt = {});

/// Diagonal ξ_μ^μ = √w_μ (𝒟_τ x)^μ / ∂_τ x^μ along the worldline (w in τ).
Matrix xi_matrix(const ActionWeights& w, double tau, std::span<const double> x, std::span<const double> xdot);
/// max |ξ - δ|
double xi_deviation(const Matrix& xi);

/// One mollified point particle at an instant of coordinate time.
struct PointSource {
  std::vector<double> position;  // spatial, D-1
  std::vector<double> velocity;  // dx^i/dt
  double charge = 0.0;           // e₀ of the particle
  double mass = 1.0;
};

class CurrentDensity {
 public:
  enum class Kind { charge, mass };

  CurrentDensity(Kind kind, MeasureWeight mw) : kind_(kind), mw_(std::move(mw)) {}

  /// q = ẽ_n (charge) or m_n (mass).
  void add(double q, SmoothedDelta delta, std::vector<double> velocity);

  Kind kind() const { return kind_; }
  double density(std::span<const double> x_spatial) const;
  /// J^μ with J⁰ = ρ.
  std::vector<double> current(std::span<const double> x_spatial) const;

 private:
  struct Term {
    double q;
    SmoothedDelta delta;
    std::vector<double> velocity;
  };
  Kind kind_;
  MeasureWeight mw_;
  std::vector<Term> terms_;
};

struct CurrentPair {
  CurrentDensity charge;
  CurrentDensity mass;
};

/// ρ_e = Σ ẽ_n δ_v(x, x_n), ρ_m = Σ m_n δ_v(x, x_n), J^i = ρ ẋ^i at time t.
CurrentPair build_currents(std::span<const PointSource> sources, const MeasureWeight& mw, double sigma, double t = 0.0);

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> GaugeField::field_strength(std::span<const T> x) const {
  const int d = dimension();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("field_strength: point dimension mismatch");
  // dA[mu*d + nu] = ∂_μ A_ν + A_ν ∂_μ ln√v
  std::vector<T> da(static_cast<std::size_t>(d * d));
  std::vector<Dual<T>> xd(x.begin(), x.end());
  for (int mu = 0; mu < d; ++mu) {
    xd[mu].der = T(1.0);
    const T lw = mw_.sqrt_log_derivative<T>(mu, x);
    VarArray<Dual<T>> v = vars<Dual<T>>(xd);
    for (int nu = 0; nu < d; ++nu) {
      Dual<T> a = components_[nu].eval(v);
      da[mu * d + nu] = a.der + a.val * lw;
    }
    xd[mu].der = T(0.0);
  }
  std::vector<T> f(static_cast<std::size_t>(d * d), T(0.0));
  for (int mu = 0; mu < d; ++mu)
    for (int nu = mu + 1; nu < d; ++nu) {
      f[mu * d + nu] = da[mu * d + nu] - da[nu * d + mu];
      f[nu * d + mu] = -f[mu * d + nu];
    }
  return f;
}

}  // namespace mscale
