#pragma once

#include <span>
#include <string>
#include <vector>

#include "mscale/action_weights.hpp"
#include "mscale/calculus.hpp"
#include "mscale/measure.hpp"
#include "mscale/ode.hpp"

namespace mscale {

/// Phase-space sample in the gauge τ = s; u^μ = (𝒟_s x)^μ.
struct WorldlineState {
  double s = 0.0;
  std::vector<double> x;
  std::vector<double> u;

  int dimension() const { return static_cast<int>(x.size()); }
};

struct PhaseDerivative {
  std::vector<double> dx;
  std::vector<double> du;
};

struct Momentum {
  std::vector<double> p;
  /// √ω_μ p^μ, the momentum of the integer-picture worldline χ.
  std::vector<double> p_bar;
  double m = 1.0;
  double m_w = 1.0;
};

struct SampleDiagnostics {
  /// ω·u·u + 1
  double constraint_residual = 0.0;
  /// p² + m_w² (isotropic) or ω·p·p + m² (anisotropic)
  double shell_residual = 0.0;
  /// |x - x_oracle|_∞ / |x_oracle|_∞ against the integer-picture closed form
  double oracle_deviation = 0.0;
};

struct Trajectory {
  std::vector<WorldlineState> samples;
  std::vector<SampleDiagnostics> diagnostics;
  ActionWeights weights;
  double mass = 1.0;

  std::size_t size() const { return samples.size(); }
  /// max_k |c_k - c_0| / max(1, s_end - s_0), c = constraint residual.
  double constraint_drift_per_unit_s() const;
  double max_abs_shell_residual() const;
  double max_oracle_deviation() const;
};

/// ω·u·u = Σ_μ ω_μ(s) η_μμ u^μ u^μ
double weighted_norm(const WorldlineState& st, const ActionWeights& w);
double constraint_residual(const WorldlineState& st, const ActionWeights& w);

/// Builds a state with u⁰ > 0 solved from ω·u·u = -1 given the spatial u.
WorldlineState make_initial_state(const ActionWeights& w, double s0, std::vector<double> x0,
                                  std::span<const double> u_spatial);

/// dx/ds = u - x Ω/2, du/ds = -u Ω/2 (the expansion of 𝒟_s² x = 0).
/// In exploration mode (ω̃ ≠ 1) the equation is 𝒟_s p = 0 with p = ω̃ m u.
PhaseDerivative eom_rhs_isotropic(const WorldlineState& st, const ActionWeights& w);
/// Per-direction version with Ω_μ.
PhaseDerivative eom_rhs_anisotropic(const WorldlineState& st, const ActionWeights& w);

struct IntegrateOptions {
  StepControl control;
  /// Abort when |ω·u·u + 1| exceeds this.
  double hard_drift_limit = 1e-6;
  /// Required normalization of the initial state.
  double initial_tolerance = 1e-10;
  /// Keep every k-th accepted sample (the last one is always kept).
  std::size_t keep_every = 1;
};

/// Integrates from `initial` to s_end; dispatches on weights.isotropic().
/// Throws ConstraintDriftError past the hard limit (skipped in exploration mode).
Trajectory integrate(const WorldlineState& initial, const ActionWeights& w, double mass, double s_end,
                     const IntegrateOptions& opt = {});

/// χ^μ = √ω_μ(s) x^μ
std::vector<double> integer_picture_map(const WorldlineState& st, const ActionWeights& w);
std::vector<std::vector<double>> integer_picture_map(const Trajectory& tr);

/// Closed form: χ affine in s with slope √ω_μ(s0) u^μ(s0), x = χ/√ω.
std::vector<double> integer_picture_oracle(const WorldlineState& initial, const ActionWeights& w, double s);

Momentum canonical_momentum(const WorldlineState& st, const ActionWeights& w, double m);
double shell_residual(const Momentum& mom, const WorldlineState& st, const ActionWeights& w);

/// f(τ) = (w/(2m))√(-û²) with û = u at τ = s.
double dirac_multiplier(const WorldlineState& st, const ActionWeights& w, double m);
/// H_D = f(τ)(p² + m_w²); isotropic weights only.
double dirac_hamiltonian(const WorldlineState& st, const Momentum& mom, const ActionWeights& w, double m);
/// 𝒟_τ x = {x, H_D} = 2 f p.
std::vector<double> hamilton_flow_velocity(const WorldlineState& st, const Momentum& mom, const ActionWeights& w,
                                           double m);
/// The phase flow generated by H_D, written in the same variables as eom_rhs_isotropic:
/// dx/ds = 2fp - xΩ/2, du/ds = -uΩ/2 (since 𝒟p = -∂H_D/∂x = 0).
PhaseDerivative hamilton_rhs(const WorldlineState& st, const ActionWeights& w, double m);

/// Applies Λ (and the translation) to x and Λ to u at every sample.
Trajectory apply_lorentz(const LorentzTransform& t, const Trajectory& tr);
WorldlineState apply_lorentz(const LorentzTransform& t, const WorldlineState& st);

struct NonrelativisticReport {
  double max_deviation = 0.0;
  double max_displacement = 0.0;
  double relative_deviation = 0.0;
  double max_velocity_ratio = 0.0;
  std::size_t samples = 0;
};

/// Compares x^i(t = x⁰(s)) with the solution of 𝒟_t² x^i = 0 (weight v0(t) of
/// `mw`) started from the same position and weighted velocity u^i(s0).
/// Throws ValidationError when |∂χ^i/∂χ⁰| ≥ 0.1 anywhere.
NonrelativisticReport nonrel_limit_compare(const Trajectory& tr, const MeasureWeight& mw);

}  // namespace mscale
