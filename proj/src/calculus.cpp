#include "mscale/calculus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"

namespace mscale {

namespace {

double flavor_factor(Flavor f) { return f == Flavor::sqrt_weight ? 1.0 : 2.0; }

std::vector<Dual1> seed(std::span<const double> x, int direction) {
  std::vector<Dual1> d(x.begin(), x.end());
  d.at(static_cast<std::size_t>(direction)).der = 1.0;
  return d;
}

int differentiated_slot(const WeightedOperatorSpec& spec) {
  if (spec.is_worldline()) return 0;
  return std::get<SpacetimeWeight>(spec.source).direction;
}

void check_point(const WeightedOperatorSpec& spec, std::span<const double> x) {
  if (spec.is_worldline()) {
    if (x.size() != 1) throw std::invalid_argument("worldline weighted derivative takes the single point {s}");
    return;
  }
  const auto& sw = std::get<SpacetimeWeight>(spec.source);
  if (static_cast<int>(x.size()) != sw.measure.dimension())
    throw std::invalid_argument("evaluation point dimension does not match the measure");
  if (sw.direction < 0 || sw.direction >= sw.measure.dimension())
    throw std::invalid_argument("weighted derivative direction out of range");
}

}  // namespace

double WeightedOperatorSpec::log_weight(std::span<const double> x) const {
  const double k = flavor_factor(flavor);
  if (const auto* ww = std::get_if<WorldlineWeight>(&source)) {
    // ∂ln√ω = Ω/2
    return k * 0.5 * ww->weight.log_derivative(x[0]);
  }
  const auto& sw = std::get<SpacetimeWeight>(source);
  return k * sw.measure.sqrt_log_derivative<double>(sw.direction, x);
}

double weighted_derivative(const WeightedOperatorSpec& spec, const AnalyticFunction& f, std::span<const double> x) {
  check_point(spec, x);
  std::vector<Dual1> xd = seed(x, differentiated_slot(spec));
  Dual1 fx = f(xd);
  return fx.der + fx.val * spec.log_weight(x);
}

double weighted_derivative(const WeightedOperatorSpec& spec, const Expr& f, std::span<const double> x) {
  if (spec.is_worldline()) {
    return weighted_derivative(
        spec, AnalyticFunction([&f](std::span<const Dual1> p) { return f.eval_at(Var::s, p[0]); }), x);
  }
  return weighted_derivative(
      spec,
      AnalyticFunction([&f](std::span<const Dual1> p) {
        VarArray<Dual1> vars;
        vars.fill(Dual1(0.0));
        for (std::size_t mu = 0; mu < p.size() && mu < 4; ++mu) vars[mu] = p[mu];
        return f.eval(vars);
      }),
      x);
}

double weighted_derivative_product_form(const WeightedOperatorSpec& spec, const AnalyticFunction& f,
                                        std::span<const double> x) {
  check_point(spec, x);
  std::vector<Dual1> xd = seed(x, differentiated_slot(spec));
  Dual1 weight;
  if (const auto* ww = std::get_if<WorldlineWeight>(&spec.source)) {
    weight = ww->weight.value(xd[0]);
  } else {
    weight = std::get<SpacetimeWeight>(spec.source).measure.value<Dual1>(xd);
  }
  if (spec.flavor == Flavor::sqrt_weight) weight = sqrt(weight);
  if (!(weight.val > 0.0)) throw SingularityError("weight vanishes at the evaluation point");
  Dual1 g = weight * f(xd);
  return g.der / weight.val;
}

double weighted_derivative(const WeightedOperatorSpec& spec, const GridField& f, std::size_t node) {
  if (spec.is_worldline()) throw std::invalid_argument("grid fields take spacetime weights");
  const auto& sw = std::get<SpacetimeWeight>(spec.source);
  const GridGeometry& g = f.geometry;
  const int axis = sw.direction;
  if (axis < 0 || axis >= g.dimension()) throw std::invalid_argument("weighted derivative direction out of range");
  if (g.extents[axis] < 5) throw StencilError("grid axis has fewer than 5 nodes");
  const int i = g.index_along(node, axis);
  if (i == 0 || i == g.extents[axis] - 1) {
    std::ostringstream msg;
    msg << "node " << node << " lies on the boundary of axis " << axis << "; no central stencil";
    throw StencilError(msg.str());
  }
  const std::size_t st = g.stride(axis);
  std::vector<double> x = g.point(node);
  double d = (f.values[node + st] - f.values[node - st]) / (2.0 * g.spacing[axis]);
  return d + f.values[node] * spec.log_weight(x);
}

GridField weighted_derivative(const WeightedOperatorSpec& spec, const GridField& f) {
  if (spec.is_worldline()) throw std::invalid_argument("grid fields take spacetime weights");
  const auto& sw = std::get<SpacetimeWeight>(spec.source);
  const GridGeometry& g = f.geometry;
  const int axis = sw.direction;
  if (axis < 0 || axis >= g.dimension()) throw std::invalid_argument("weighted derivative direction out of range");
  const int n = g.extents[axis];
  // The weight factorizes, so its log-derivative depends on x^axis only.
  std::vector<double> lw(static_cast<std::size_t>(n));
  const double k = flavor_factor(spec.flavor);
  const WeightProfile& prof = sw.measure.profile(axis);
  for (int i = 0; i < n; ++i) lw[static_cast<std::size_t>(i)] = k * prof.sqrt_log_derivative(g.coordinate(axis, i));
  return grid_derivative_with_log_weight(f, axis, lw);
}

double anisotropic_differential(const ActionWeights& weights, const Expr& x_of_s, int mu, double s) {
  Dual1 x = x_of_s.eval_at(Var::s, variable(s));
  return x.der + 0.5 * x.val * weights.log_derivative(mu, s);
}

std::vector<double> anisotropic_differential(const ActionWeights& weights, std::span<const double> s,
                                             std::span<const double> x, int mu) {
  const std::size_t n = s.size();
  if (x.size() != n) throw std::invalid_argument("worldline samples and parameters differ in length");
  if (n < 3) throw StencilError("sampled differential needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(s[i] > s[i - 1])) throw std::invalid_argument("worldline parameter must be strictly increasing");

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Three-point Lagrange derivative on (possibly) nonuniform nodes.
    std::size_t c = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
    const double s0 = s[c - 1], s1 = s[c], s2 = s[c + 1];
    const double t = s[i];
    const double d0 = ((t - s1) + (t - s2)) / ((s0 - s1) * (s0 - s2));
    const double d1 = ((t - s0) + (t - s2)) / ((s1 - s0) * (s1 - s2));
    const double d2 = ((t - s0) + (t - s1)) / ((s2 - s0) * (s2 - s1));
    const double dx = d0 * x[c - 1] + d1 * x[c] + d2 * x[c + 1];
    out[i] = dx + 0.5 * x[i] * weights.log_derivative(mu, t);
  }
  return out;
}

LorentzTransform::LorentzTransform(Matrix lambda, std::vector<double> translation, double tolerance)
    : lambda_(std::move(lambda)), translation_(std::move(translation)) {
  const int d = lambda_.rows();
  if (d < 2 || lambda_.cols() != d) throw std::invalid_argument("Lorentz matrix must be square with D >= 2");
  if (translation_.empty()) translation_.assign(static_cast<std::size_t>(d), 0.0);
  if (static_cast<int>(translation_.size()) != d) throw std::invalid_argument("translation has the wrong dimension");
  Matrix eta_m(d, d);
  for (int mu = 0; mu < d; ++mu) eta_m(mu, mu) = eta(mu);
  const double err = (lambda_.transpose() * eta_m * lambda_).max_abs_difference(eta_m);
  if (!(err <= tolerance)) {
    std::ostringstream msg;
    msg << "matrix is not a Lorentz transformation: max |L^T eta L - eta| = " << err;
    throw ValidationError("lorentz", msg.str());
  }
}

LorentzTransform LorentzTransform::identity(int dimension) { return LorentzTransform(Matrix::identity(dimension)); }

LorentzTransform LorentzTransform::boost(int dimension, int axis, double rapidity) {
  if (axis < 1 || axis >= dimension) throw std::invalid_argument("boost axis must be spatial");
  Matrix m = Matrix::identity(dimension);
  const double c = std::cosh(rapidity), s = std::sinh(rapidity);
  m(0, 0) = c;
  m(axis, axis) = c;
  m(0, axis) = -s;
  m(axis, 0) = -s;
  return LorentzTransform(std::move(m), {}, 1e-12 * c * c);
}

std::vector<double> LorentzTransform::apply_vector(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dimension()) throw std::invalid_argument("vector dimension mismatch");
  return lambda_.apply(v);
}

std::vector<double> LorentzTransform::apply_point(std::span<const double> x) const {
  std::vector<double> y = apply_vector(x);
  for (std::size_t mu = 0; mu < y.size(); ++mu) y[mu] += translation_[mu];
  return y;
}

std::vector<double> apply_lorentz(const LorentzTransform& t, std::span<const double> x) { return t.apply_point(x); }

}  // namespace mscale
