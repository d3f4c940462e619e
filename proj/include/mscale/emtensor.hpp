#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mscale/charged_particle.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/grid.hpp"
#include "mscale/measure.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

/// D×D grid tensor, component (μ, ν) at comp[μ*D + ν]. Index placement is
/// up to the owner (F is stored covariant, T contravariant).
struct TensorField {
  int d = 0;
  std::vector<GridField> comp;

  TensorField() = default;
  TensorField(const GridGeometry& g, int dimension)
      : d(dimension), comp(static_cast<std::size_t>(dimension * dimension), GridField(g)) {}

  GridField& operator()(int mu, int nu) { return comp[static_cast<std::size_t>(mu * d + nu)]; }
  const GridField& operator()(int mu, int nu) const { return comp[static_cast<std::size_t>(mu * d + nu)]; }
  const GridGeometry& geometry() const { return comp.front().geometry; }
};

/// D grid fields indexed by one spacetime index.
using VectorField = std::vector<GridField>;

struct EnergyMomentumField {
  enum class Kind { particle, maxwell, total };
  Kind kind = Kind::particle;
  /// T^μν
  TensorField upper;
  MeasureWeight measure;

  /// T^μ_ν = T^μσ η_σν
  GridField mixed(int mu, int nu) const;
  /// max |T^μν - T^νμ|
  double max_asymmetry() const;
};

EnergyMomentumField operator+(const EnergyMomentumField& a, const EnergyMomentumField& b);
EnergyMomentumField operator-(const EnergyMomentumField& a, const EnergyMomentumField& b);

/// T_μν = -¼ F^στ F_στ η_μν + F_μ^σ F_νσ from covariant F (pointwise).
Matrix maxwell_emt_lower(const Matrix& f_lower);

/// F_μν sampled on the grid from an analytic gauge field.
TensorField sample_field_strength(const GaugeField& field, const GridGeometry& g);
EnergyMomentumField maxwell_emt(const TensorField& f_lower, const MeasureWeight& mw);

/// J^μ = 𝒟_ν F^μν evaluated exactly (nested duals): the source for which the
/// given potential solves Maxwell's equations.
std::vector<double> maxwell_source(const GaugeField& field, std::span<const double> x);
VectorField sample_maxwell_source(const GaugeField& field, const GridGeometry& g);

/// Σ_μ 𝒟̌_μ T^μ_ν on the grid, one field per ν.
VectorField weighted_divergence(const EnergyMomentumField& t);

/// J^μ F_μν per ν.
VectorField current_contraction(const VectorField& j_upper, const TensorField& f_lower);

/// Coordinate-time view of a worldline with trivial action weights: cubic
/// Hermite interpolation in s plus Newton on x⁰(s) = t.
class ParticleHistory {
 public:
  struct Instant {
    double s;
    std::vector<double> x;
    std::vector<double> u;
    /// ẋ^μ = dx^μ/dt (ẋ⁰ = 1)
    std::vector<double> xdot;
  };

  /// Free worldline; weights must be trivial.
  static ParticleHistory from_free(const Trajectory& tr);
  static ParticleHistory from_charged(const ChargedTrajectory& ct, const ChargedParticleSpec& spec,
                                      const GaugeField& field);

  Instant at_time(double t) const;
  double t_min() const { return x_.front()[0]; }
  double t_max() const { return x_.back()[0]; }
  int dimension() const { return static_cast<int>(x_.front().size()); }

 private:
  std::vector<double> s_;
  std::vector<std::vector<double>> x_, u_, dx_, du_;
};

/// Particle-side fields on a spacetime grid (axis 0 = t).
struct ParticleFields {
  GridField rho_m;
  VectorField j_m;  // J_m^μ = ρ_m ẋ^μ
  VectorField j_e;  // J_e^μ = ρ_e ẋ^μ
  EnergyMomentumField emt;
  /// max |ρ_m γ u^μ u^ν - J_m^μ u^ν| over the grid
  double form_mismatch = 0.0;
};

ParticleFields particle_emt(const ParticleHistory& history, double mass, double charge, const MeasureWeight& mw,
                            double sigma, const GridGeometry& g);

struct MassContinuityReport {
  GridField residual;
  double residual_max = 0.0;
  std::vector<double> slice_mass;
  double relative_mass_drift = 0.0;
};

/// 𝒟̌_μ J_m^μ = ρ̇_m + Σ_i (1/v_i) ∂_i(v_i J_m^i), and M(t) = ∫ v ρ_m per time slice.
MassContinuityReport mass_continuity_residual(const VectorField& j_m, const MeasureWeight& mw);

struct ContinuityReport {
  VectorField residual;  // per ν
  double residual_max = 0.0;
  /// max |𝒟_ν F^μν - J^μ| (Maxwell-equation consistency of the inputs)
  double maxwell_residual = 0.0;
  bool maxwell_consistent = true;
};

/// 𝒟̌_μ ᶠT^μ_ν - J_e^μ F_μν. Inconsistent (F, J_e) pairs are flagged, not rejected.
ContinuityReport maxwell_continuity_residual(const TensorField& f_lower, const VectorField& j_e,
                                             const MeasureWeight& mw, double consistency_threshold = 1e-6);

/// 𝒟̌_μ ᵖT^μ_ν + J_e^μ F_μν.
ContinuityReport particle_continuity_residual(const EnergyMomentumField& particle, const VectorField& j_e,
                                              const TensorField& f_lower);

struct CyclicReport {
  /// max over points/triples of |𝒟_σF_μν + 𝒟_μF_νσ + 𝒟_νF_σμ|
  double sqrt_weight_max = 0.0;
  /// same with 𝒟̌
  double full_weight_max = 0.0;
  std::size_t points = 0;
};

/// Both cyclic sums at `count` uniform random points of the box [lo, hi].
CyclicReport cyclic_identity_check(const GaugeField& field, std::span<const double> lo, std::span<const double> hi,
                                   std::size_t count, std::uint64_t seed);

/// Exact 1+1 self-field of a Gaussian-mollified charge at x_p on a spatial
/// weight v(x) (v₀ = 1): F_10 = e₀ (Φ((x - x_p)/σ) - ½) / √v(x).
double self_field_1p1(double e0, double x_p, double sigma, const MeasureWeight& mw, double x);

struct ConvergenceReport {
  std::vector<double> h;
  std::vector<double> norm;
  /// log2 ratios between consecutive levels (for halving h)
  std::vector<double> pairwise_order;
  /// least-squares slope of log(norm) against log(h)
  double order_estimate = 0.0;
};

ConvergenceReport convergence_report(std::vector<double> h, std::vector<double> norm);

/// Manufactured-solution study in 1+1 (or D+1 slices): square grids of n
/// nodes per axis on [lo, hi]; J = 𝒟_ν F^μν exactly, residual max-norm on interior nodes.
ConvergenceReport maxwell_manufactured_study(const GaugeField& field, std::span<const double> lo,
                                             std::span<const double> hi, std::span<const int> nodes_per_axis);

/// Total-conservation study for a charged particle in a uniform field (1+1, v₀ = 1).
struct TotalConservationLevel {
  double sigma = 0.0;
  double h = 0.0;
  double residual_max = 0.0;
  double particle_residual_max = 0.0;
  double maxwell_residual_max = 0.0;
};

/// Evaluates max |𝒟̌_μ(ᵖT + ᶠT)^μ_ν| over 5-node time slabs centered on
/// `times`. ᶠT is the Maxwell tensor of F_ext + F_self with the self-field's
/// own tensor subtracted (bound self-energy).
TotalConservationLevel total_conservation_level(const ParticleHistory& history, const ChargedParticleSpec& spec,
                                                const GaugeField& external, double sigma, double h,
                                                std::span<const double> times, double half_width);

}  // namespace mscale
