#include "mscale/qtheory.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

CompositeProfile CompositeProfile::identity() { return {}; }

CompositeProfile CompositeProfile::power(double alpha, double length_scale) {
  if (!(alpha > 0.0) || !(length_scale > 0.0))
    throw std::invalid_argument("power composite profile needs alpha > 0 and length_scale > 0");
  CompositeProfile p;
  p.kind_ = Kind::power;
  p.alpha_ = alpha;
  p.length_ = length_scale;
  return p;
}

CompositeProfile CompositeProfile::multiscale(double alpha, double length_scale) {
  if (!(alpha > 0.0) || !(length_scale > 0.0))
    throw std::invalid_argument("multiscale composite profile needs alpha > 0 and length_scale > 0");
  CompositeProfile p = power(alpha, length_scale);
  p.kind_ = Kind::multiscale;
  return p;
}

CompositeProfile CompositeProfile::expression(const std::string& text, int direction, double lo, double hi) {
  if (direction < 0 || direction > 3) throw std::invalid_argument("expression profile direction must be 0..3");
  if (!(hi > lo)) throw std::invalid_argument("expression profile needs a domain lo < hi");
  CompositeProfile p;
  p.kind_ = Kind::expression;
  p.expr_ = Expr::parse(text);
  p.direction_ = direction;
  p.lo_ = lo;
  p.hi_ = hi;
  for (int v = 0; v < kVarCount; ++v)
    if (v != direction && p.expr_.depends_on(static_cast<Var>(v)))
      throw std::invalid_argument("profile '" + text + "' must depend on its own coordinate only");
  // sampled monotonicity check; a dip narrower than the sampling can still slip through
  constexpr int kSamples = 1024;
  double prev = p.value(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double cur = p.value(lo + (hi - lo) * k / kSamples);
    if (!(cur > prev)) throw std::invalid_argument("profile '" + text + "' is not increasing on its domain");
    prev = cur;
  }
  return p;
}

double CompositeProfile::value(double x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::power:
      return std::copysign(length_ * std::pow(std::abs(x / length_), alpha_), x);
    case Kind::multiscale:
      return x + std::copysign(length_ / alpha_ * std::pow(std::abs(x / length_), alpha_), x);
    case Kind::expression:
      if (x < lo_ || x > hi_) {
        std::ostringstream msg;
        msg << "composite profile evaluated outside its domain [" << lo_ << ", " << hi_ << "] at " << x;
        throw SingularityError(msg.str());
      }
      return expr_.eval_at(static_cast<Var>(direction_), x);
  }
  return x;
}

double CompositeProfile::derivative(double x) const {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::power:
    case Kind::multiscale: {
      if (x == 0.0 && alpha_ < 1.0) throw SingularityError("composite profile derivative is singular at the origin");
      const double p = std::pow(std::abs(x / length_), alpha_ - 1.0);
      return kind_ == Kind::power ? alpha_ * p : 1.0 + p;
    }
    case Kind::expression: {
      if (x < lo_ || x > hi_) throw SingularityError("composite profile evaluated outside its domain");
      return expr_.eval_at(static_cast<Var>(direction_), variable(x)).der;
    }
  }
  return 1.0;
}

double CompositeProfile::bracket_invert(double rho, double lo, double hi) const {
  double flo = value(lo) - rho, fhi = value(hi) - rho;
  if (flo > 0.0 || fhi < 0.0) {
    std::ostringstream msg;
    msg << "value " << rho << " is outside the profile range [" << value(lo) << ", " << value(hi) << "]";
    throw InversionError(msg.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) - rho > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish, kept inside the bracket.
  for (int it = 0; it < 8; ++it) {
    const double d = derivative(x);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    const double next = x - (value(x) - rho) / d;
    if (!(next >= lo && next <= hi)) break;
    if (next == x) break;
    x = next;
  }
  return x;
}

double CompositeProfile::invert(double rho) const {
  switch (kind_) {
    case Kind::identity:
      return rho;
    case Kind::power:
      return std::copysign(length_ * std::pow(std::abs(rho / length_), 1.0 / alpha_), rho);
    case Kind::multiscale: {
      if (rho == 0.0) return 0.0;
      // |ϱ| ≥ |x| bounds the root.
      const double r = std::abs(rho);
      const double x = bracket_invert(r, 0.0, r);
      return std::copysign(x, rho);
    }
    case Kind::expression:
      return bracket_invert(rho, lo_, hi_);
  }
  return rho;
}

CompositeCoordinates::CompositeCoordinates(std::vector<CompositeProfile> profiles) : profiles_(std::move(profiles)) {
  if (profiles_.size() < 2) throw std::invalid_argument("composite coordinates need D >= 2");
}

std::vector<double> CompositeCoordinates::to_rho(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension()) throw std::invalid_argument("to_rho: dimension mismatch");
  std::vector<double> r(x.size());
  for (std::size_t mu = 0; mu < x.size(); ++mu) r[mu] = profiles_[mu].value(x[mu]);
  return r;
}

std::vector<double> CompositeCoordinates::to_x(std::span<const double> rho) const {
  if (static_cast<int>(rho.size()) != dimension()) throw std::invalid_argument("to_x: dimension mismatch");
  std::vector<double> x(rho.size());
  for (std::size_t mu = 0; mu < rho.size(); ++mu) x[mu] = profiles_[mu].invert(rho[mu]);
  return x;
}

std::vector<double> CompositeCoordinates::differential(std::span<const double> x, std::span<const double> dx) const {
  if (static_cast<int>(x.size()) != dimension() || dx.size() != x.size())
    throw std::invalid_argument("differential: dimension mismatch");
  std::vector<double> d(x.size());
  for (std::size_t mu = 0; mu < x.size(); ++mu) d[mu] = profiles_[mu].derivative(x[mu]) * dx[mu];
  return d;
}

std::vector<double> q_normalized_velocity(std::span<const double> drho_spatial) {
  std::vector<double> v(drho_spatial.size() + 1);
  double sp = 0.0;
  for (std::size_t i = 0; i < drho_spatial.size(); ++i) {
    v[i + 1] = drho_spatial[i];
    sp += drho_spatial[i] * drho_spatial[i];
  }
  v[0] = std::sqrt(1.0 + sp);
  return v;
}

QTrajectory q_geodesic(const CompositeCoordinates& cc, std::span<const double> x0, std::span<const double> drho_ds,
                       double s0, double s1, std::size_t intervals) {
  const int d = cc.dimension();
  if (static_cast<int>(x0.size()) != d || static_cast<int>(drho_ds.size()) != d)
    throw std::invalid_argument("q_geodesic: dimension mismatch");
  if (!(s1 > s0) || intervals == 0) throw std::invalid_argument("q_geodesic: need s1 > s0 and at least one interval");
  const double norm = minkowski_dot<double>(drho_ds, drho_ds);
  if (!(norm < 0.0)) throw SignatureError("q_geodesic: initial velocity is not timelike in rho-space");
  if (std::abs(norm + 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "q_geodesic: drho/ds is not normalized (drho.drho = " << norm << ")";
    throw ValidationError("drho_ds", msg.str());
  }
  const std::vector<double> rho0 = cc.to_rho(x0);
  QTrajectory tr;
  tr.samples.reserve(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    QSample q;
    q.s = k == intervals ? s1 : s0 + (s1 - s0) * static_cast<double>(k) / static_cast<double>(intervals);
    q.rho.resize(static_cast<std::size_t>(d));
    for (int mu = 0; mu < d; ++mu) q.rho[mu] = rho0[mu] + (q.s - s0) * drho_ds[mu];
    q.x = cc.to_x(q.rho);
    q.drho_ds.assign(drho_ds.begin(), drho_ds.end());
    q.dx_ds.resize(static_cast<std::size_t>(d));
    for (int mu = 0; mu < d; ++mu) q.dx_ds[mu] = drho_ds[mu] / cc.profile(mu).derivative(q.x[mu]);
    tr.samples.push_back(std::move(q));
  }
  return tr;
}

double q_line_element_rho(std::span<const double> drho) {
  const double n = minkowski_dot<double>(drho, drho);
  if (!(n < 0.0)) {
    std::ostringstream msg;
    msg << "q line element: displacement is not timelike (drho.drho = " << n << ")";
    throw SignatureError(msg.str());
  }
  return std::sqrt(-n);
}

double q_line_element(const CompositeCoordinates& cc, std::span<const double> x, std::span<const double> dx) {
  return q_line_element_rho(cc.differential(x, dx));
}

}  // namespace mscale
