#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mscale/action_weights.hpp"
#include "mscale/dual.hpp"
#include "mscale/expr.hpp"
#include "mscale/grid.hpp"
#include "mscale/measure.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

/// sqrt_weight: 𝒟 = (1/√v) ∂ (√v ·)    full_weight: 𝒟̌ = (1/v) ∂ (v ·)
enum class Flavor { sqrt_weight, full_weight };

struct SpacetimeWeight {
  MeasureWeight measure;
  int direction = 0;
};

struct WorldlineWeight {
  ActionProfile weight;
};

struct WeightedOperatorSpec {
  Flavor flavor = Flavor::sqrt_weight;
  std::variant<SpacetimeWeight, WorldlineWeight> source;

  static WeightedOperatorSpec spacetime(MeasureWeight mw, int mu, Flavor flavor = Flavor::sqrt_weight) {
    return {flavor, SpacetimeWeight{std::move(mw), mu}};
  }
  static WeightedOperatorSpec worldline(ActionProfile w, Flavor flavor = Flavor::sqrt_weight) {
    return {flavor, WorldlineWeight{std::move(w)}};
  }

  bool is_worldline() const { return std::holds_alternative<WorldlineWeight>(source); }
  /// Weight term L with 𝒟f = ∂f + f·L at the evaluation point.
  double log_weight(std::span<const double> x) const;
};

/// f(x) evaluated on dual numbers; the returned tangent is the derivative
/// along the seeded direction.
using AnalyticFunction = std::function<Dual1(std::span<const Dual1>)>;

/// Weighted derivative of an analytic function at x, via the expanded form
/// ∂f + f·∂ln√v (or ∂ln v). For worldline weights x = {s}.
double weighted_derivative(const WeightedOperatorSpec& spec, const AnalyticFunction& f, std::span<const double> x);
double weighted_derivative(const WeightedOperatorSpec& spec, const Expr& f, std::span<const double> x);

/// The literal product form (1/√v)∂(√v f); kept as a cross-check.
double weighted_derivative_product_form(const WeightedOperatorSpec& spec, const AnalyticFunction& f,
                                        std::span<const double> x);

/// Weighted derivative of a grid field at one node. Throws StencilError on
/// boundary nodes.
double weighted_derivative(const WeightedOperatorSpec& spec, const GridField& f, std::size_t node);

/// Weighted derivative of a grid field at every node along the spec's
/// direction (one-sided closures at the boundary). Spacetime weights only.
GridField weighted_derivative(const WeightedOperatorSpec& spec, const GridField& f);

/// (d_ω x)^μ / ds = (1/√ω_μ) d[√ω_μ x^μ]/ds for an analytic worldline x^μ(s).
double anisotropic_differential(const ActionWeights& weights, const Expr& x_of_s, int mu, double s);

/// Same on a sampled worldline (second-order differences, nonuniform s allowed).
std::vector<double> anisotropic_differential(const ActionWeights& weights, std::span<const double> s,
                                             std::span<const double> x_mu, int mu);

/// Proper Lorentz transformation x' = Λx + a.
class LorentzTransform {
 public:
  /// Rejects Λ with max|ΛᵀηΛ - η| > tolerance.
  explicit LorentzTransform(Matrix lambda, std::vector<double> translation = {}, double tolerance = 1e-12);

  static LorentzTransform identity(int dimension);
  /// Boost along spatial axis `axis` (1..D-1) with rapidity φ:
  /// t' = t coshφ - x sinhφ, x' = x coshφ - t sinhφ.
  static LorentzTransform boost(int dimension, int axis, double rapidity);

  int dimension() const { return lambda_.rows(); }
  const Matrix& matrix() const { return lambda_; }
  const std::vector<double>& translation() const { return translation_; }

  std::vector<double> apply_point(std::span<const double> x) const;
  /// Vectors (velocities, momenta) transform without the translation.
  std::vector<double> apply_vector(std::span<const double> v) const;

 private:
  Matrix lambda_;
  std::vector<double> translation_;
};

std::vector<double> apply_lorentz(const LorentzTransform& t, std::span<const double> x);

}  // namespace mscale
