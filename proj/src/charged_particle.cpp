#include "mscale/charged_particle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"
#include "mscale/stencil.hpp"

namespace mscale {

GaugeField::GaugeField(std::vector<Expr> components, MeasureWeight mw)
    : components_(std::move(components)), mw_(std::move(mw)) {
  if (static_cast<int>(components_.size()) != mw_.dimension())
    throw std::invalid_argument("gauge field needs one component per spacetime dimension");
  for (const auto& c : components_)
    if (c.depends_on(Var::s)) throw std::invalid_argument("gauge field components may not depend on s");
}

GaugeField GaugeField::uniform_E(MeasureWeight mw, double E, int axis) {
  const int d = mw.dimension();
  if (axis < 1 || axis >= d) throw std::invalid_argument("uniform_E: axis must be spatial");
  std::vector<Expr> a(static_cast<std::size_t>(d), Expr::constant(0.0));
  a[0] = Expr::constant(E) * Expr::variable(static_cast<Var>(axis));
  GaugeField g(std::move(a), std::move(mw));
  g.preset_ = Preset::uniform_E;
  g.strength_ = E;
  g.axis_ = axis;
  return g;
}

GaugeField GaugeField::uniform_B(MeasureWeight mw, double B) {
  const int d = mw.dimension();
  if (d < 3) throw std::invalid_argument("uniform_B needs at least two spatial dimensions");
  std::vector<Expr> a(static_cast<std::size_t>(d), Expr::constant(0.0));
  a[1] = Expr::constant(-0.5 * B) * Expr::variable(Var::x2);
  a[2] = Expr::constant(0.5 * B) * Expr::variable(Var::x1);
  GaugeField g(std::move(a), std::move(mw));
  g.preset_ = Preset::uniform_B;
  g.strength_ = B;
  return g;
}

std::vector<double> GaugeField::integer_picture_field_strength(std::span<const double> x) const {
  const int d = dimension();
  std::vector<double> da(static_cast<std::size_t>(d * d));
  std::vector<Dual1> xd(x.begin(), x.end());
  for (int mu = 0; mu < d; ++mu) {
    xd[mu].der = 1.0;
    Dual1 root = sqrt(mw_.value<Dual1>(xd));
    VarArray<Dual1> v = vars<Dual1>(xd);
    for (int nu = 0; nu < d; ++nu) da[mu * d + nu] = (root * components_[nu].eval(v)).der;
    xd[mu].der = 0.0;
  }
  std::vector<double> f(static_cast<std::size_t>(d * d), 0.0);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) f[mu * d + nu] = da[mu * d + nu] - da[nu * d + mu];
  return f;
}

Matrix field_strength(const GaugeField& field, std::span<const double> x) {
  const int d = field.dimension();
  std::vector<double> f = field.field_strength<double>(x);
  Matrix m(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) m(mu, nu) = f[mu * d + nu];
  return m;
}

double effective_charge(double e0, const MeasureWeight& mw, std::span<const double> x) {
  return e0 * std::sqrt(eval_weight(mw, x));
}

void check_compatibility(const MeasureWeight& mw, const ActionWeights& w) {
  if (!mw.time_is_trivial())
    throw CompatibilityError(
        "charged particle requires v0(t) = 1 (compatibility condition v0 = 1, w_mu = 1: the geometry must be "
        "multiscale only along spatial directions)");
  if (!w.is_trivial() || !w.tilde().is_trivial())
    throw CompatibilityError(
        "charged particle requires trivial action weights w_mu = 1 (compatibility condition v0 = 1, w_mu = 1: the "
        "geometry must be multiscale only along spatial directions)");
  if (w.dimension() != mw.dimension()) throw std::invalid_argument("measure and action weights differ in dimension");
}

namespace {

void lorentz_accel(std::span<const double> x, std::span<const double> u, double e0, double m,
                   const GaugeField& field, std::span<double> du) {
  const int d = field.dimension();
  const std::vector<double> f = field.field_strength<double>(x);
  const double coupling = effective_charge(e0, field.measure(), x) / m;
  for (int mu = 0; mu < d; ++mu) {
    double acc = 0.0;
    for (int nu = 0; nu < d; ++nu) acc += u[nu] * f[mu * d + nu];
    du[mu] = eta(mu) * coupling * acc;  // raise μ
  }
}

}  // namespace

PhaseDerivative lorentz_rhs(const WorldlineState& st, const ChargedParticleSpec& spec, const GaugeField& field) {
  if (st.dimension() != field.dimension()) throw std::invalid_argument("state and field dimensions differ");
  PhaseDerivative d{st.u, std::vector<double>(st.u.size())};
  lorentz_accel(st.x, st.u, spec.charge, spec.mass, field, d.du);
  return d;
}

double ChargedTrajectory::max_eom_residual() const {
  double m = 0.0;
  for (double r : eom_residual) m = std::max(m, r);
  return m;
}

std::optional<WorldlineState> charged_closed_form(const ChargedParticleSpec& spec, const GaugeField& field, double s) {
  if (field.preset() == GaugeField::Preset::custom || !field.measure().is_trivial()) return std::nullopt;
  const WorldlineState& in = spec.initial;
  const double ds = s - in.s;
  WorldlineState out{s, in.x, in.u};
  for (std::size_t mu = 0; mu < out.x.size(); ++mu) out.x[mu] += in.u[mu] * ds;
  const double rate = spec.charge * field.preset_strength() / spec.mass;
  if (rate == 0.0) return out;

  if (field.preset() == GaugeField::Preset::uniform_E) {
    // (u⁰, u^a) rotate hyperbolically: du⁰/ds = κ u^a, du^a/ds = κ u⁰.
    const int a = field.preset_axis();
    const double ch = std::cosh(rate * ds), sh = std::sinh(rate * ds);
    const double u0 = in.u[0], ua = in.u[a];
    out.u[0] = u0 * ch + ua * sh;
    out.u[a] = ua * ch + u0 * sh;
    out.x[0] = in.x[0] + (u0 * sh + ua * (ch - 1.0)) / rate;
    out.x[a] = in.x[a] + (ua * sh + u0 * (ch - 1.0)) / rate;
  } else {
    // du¹/ds = ω u², du²/ds = -ω u¹.
    const double c = std::cos(rate * ds), sn = std::sin(rate * ds);
    const double a = in.u[1], b = in.u[2];
    out.u[1] = a * c + b * sn;
    out.u[2] = b * c - a * sn;
    out.x[1] = in.x[1] + (a * sn + b * (1.0 - c)) / rate;
    out.x[2] = in.x[2] + (b * sn - a * (1.0 - c)) / rate;
  }
  return out;
}

ChargedTrajectory integrate_charged(const ChargedParticleSpec& spec, const GaugeField& field,
                                    const ActionWeights& weights, double s_end, const IntegrateOptions& opt) {
  check_compatibility(field.measure(), weights);
  if (!(spec.mass > 0.0)) throw std::invalid_argument("mass must be positive");
  const WorldlineState& initial = spec.initial;
  if (initial.dimension() != field.dimension() || initial.u.size() != initial.x.size())
    throw std::invalid_argument("initial state dimension does not match the field");
  const double c0 = constraint_residual(initial, weights);
  if (!(std::abs(c0) <= opt.initial_tolerance)) {
    std::ostringstream msg;
    msg << "initial state is not normalized: u.u + 1 = " << c0;
    throw ValidationError("initial_state", msg.str());
  }

  const std::size_t d = initial.x.size();
  const double m = spec.mass, e0 = spec.charge;
  OdeRhs rhs = [&field, d, m, e0](double, std::span<const double> y, std::span<double> dy) {
    std::copy(y.begin() + d, y.end(), dy.begin());
    lorentz_accel(y.subspan(0, d), y.subspan(d), e0, m, field, dy.subspan(d));
  };

  ChargedTrajectory out;
  Trajectory& tr = out.trajectory;
  tr.weights = weights;
  tr.mass = m;
  std::vector<double> y0(initial.x);
  y0.insert(y0.end(), initial.u.begin(), initial.u.end());

  const std::size_t keep = std::max<std::size_t>(opt.keep_every, 1);
  std::size_t counter = 0;
  std::optional<WorldlineState> pending;
  SampleDiagnostics pending_diag;
  auto observe = [&](double s, std::span<const double> y) {
    WorldlineState st{s, {y.begin(), y.begin() + d}, {y.begin() + d, y.end()}};
    SampleDiagnostics diag;
    diag.constraint_residual = constraint_residual(st, weights);
    diag.shell_residual = shell_residual(canonical_momentum(st, weights, m), st, weights);
    if (auto exact = charged_closed_form(spec, field, s)) {
      double dev = 0.0, scale = 0.0;
      for (std::size_t mu = 0; mu < d; ++mu) {
        dev = std::max(dev, std::abs(st.x[mu] - exact->x[mu]));
        scale = std::max(scale, std::abs(exact->x[mu]));
      }
      diag.oracle_deviation = scale > 0.0 ? dev / scale : dev;
    } else {
      diag.oracle_deviation = std::nan("");
    }
    if (!(std::abs(diag.constraint_residual) <= opt.hard_drift_limit)) {
      std::ostringstream msg;
      msg << "normalization drift " << diag.constraint_residual << " exceeds hard limit " << opt.hard_drift_limit
          << " at s = " << s;
      std::ostringstream dump;
      dump.precision(17);
      dump << "constraint drift dump (charged)\n  s = " << s << "\n  x =";
      for (double v : st.x) dump << ' ' << v;
      dump << "\n  u =";
      for (double v : st.u) dump << ' ' << v;
      dump << '\n';
      throw ConstraintDriftError(msg.str(), dump.str());
    }
    if (counter % keep == 0) {
      tr.samples.push_back(std::move(st));
      tr.diagnostics.push_back(diag);
      pending.reset();
    } else {
      pending = std::move(st);
      pending_diag = diag;
    }
    ++counter;
    return true;
  };
  integrate_ode(rhs, initial.s, s_end, y0, opt.control, observe);
  if (pending) {
    tr.samples.push_back(std::move(*pending));
    tr.diagnostics.push_back(pending_diag);
  }

  // Post-hoc residual of the equation of motion from the samples themselves.
  const std::size_t n = tr.size();
  std::vector<double> s(n), comp(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = tr.samples[k].s;
  out.eom_residual.assign(n, 0.0);
  if (n >= 5) {
    std::vector<double> du(n * d);
    for (std::size_t mu = 0; mu < d; ++mu) {
      for (std::size_t k = 0; k < n; ++k) comp[k] = tr.samples[k].u[mu];
      for (std::size_t k = 0; k < n; ++k) du[k * d + mu] = sampled_derivative(s, comp, k, 1, 5);
    }
    std::vector<double> acc(d);
    for (std::size_t k = 0; k < n; ++k) {
      const WorldlineState& st = tr.samples[k];
      lorentz_accel(st.x, st.u, e0, m, field, acc);
      double r = 0.0;
      for (std::size_t mu = 0; mu < d; ++mu) r = std::max(r, m * std::abs(du[k * d + mu] - acc[mu]));
      out.eom_residual[k] = r;
    }
  } else {
    std::fill(out.eom_residual.begin(), out.eom_residual.end(), std::nan(""));
  }
  return out;
}

Matrix xi_matrix(const ActionWeights& w, double tau, std::span<const double> x, std::span<const double> xdot) {
  const int d = w.dimension();
  if (static_cast<int>(x.size()) != d || static_cast<int>(xdot.size()) != d)
    throw std::invalid_argument("xi_matrix: dimension mismatch");
  Matrix xi(d, d);
  for (int mu = 0; mu < d; ++mu) {
    const ActionProfile& prof = w.direction(mu);
    if (prof.is_trivial()) {
      xi(mu, mu) = 1.0;
      continue;
    }
    if (xdot[mu] == 0.0) {
      std::ostringstream msg;
      msg << "xi_matrix: d x^" << mu << "/d tau vanishes";
      throw DegenerateGeometryError(msg.str());
    }
    const double root = std::sqrt(prof.at(tau));
    const double weighted_velocity = xdot[mu] + 0.5 * x[mu] * prof.log_derivative(tau);
    xi(mu, mu) = root * weighted_velocity / xdot[mu];
  }
  return xi;
}

double xi_deviation(const Matrix& xi) { return xi.max_abs_difference(Matrix::identity(xi.rows())); }

void CurrentDensity::add(double q, SmoothedDelta delta, std::vector<double> velocity) {
  if (velocity.size() != delta.center().size()) throw std::invalid_argument("current: velocity dimension mismatch");
  terms_.push_back({q, std::move(delta), std::move(velocity)});
}

double CurrentDensity::density(std::span<const double> x_spatial) const {
  double r = 0.0;
  for (const auto& t : terms_) r += t.q * t.delta(x_spatial);
  return r;
}

std::vector<double> CurrentDensity::current(std::span<const double> x_spatial) const {
  std::vector<double> j(x_spatial.size() + 1, 0.0);
  for (const auto& t : terms_) {
    const double rho = t.q * t.delta(x_spatial);
    j[0] += rho;
    for (std::size_t i = 0; i < t.velocity.size(); ++i) j[i + 1] += rho * t.velocity[i];
  }
  return j;
}

CurrentPair build_currents(std::span<const PointSource> sources, const MeasureWeight& mw, double sigma, double t) {
  if (!(sigma > 0.0)) throw std::invalid_argument("smoothing width sigma must be positive");
  CurrentPair out{CurrentDensity(CurrentDensity::Kind::charge, mw), CurrentDensity(CurrentDensity::Kind::mass, mw)};
  const auto d = static_cast<std::size_t>(mw.dimension());
  for (const auto& src : sources) {
    if (src.position.size() + 1 != d) throw std::invalid_argument("point source position must be spatial");
    std::vector<double> x(d);
    x[0] = t;
    std::copy(src.position.begin(), src.position.end(), x.begin() + 1);
    const double e_eff = effective_charge(src.charge, mw, x);
    SmoothedDelta delta(src.position, sigma, mw);
    out.charge.add(e_eff, delta, src.velocity);
    out.mass.add(src.mass, delta, src.velocity);
  }
  return out;
}

}  // namespace mscale
