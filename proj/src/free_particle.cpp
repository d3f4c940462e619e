#include "mscale/free_particle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"
#include "mscale/minkowski.hpp"

namespace mscale {

namespace {

void check_dims(const WorldlineState& st, const ActionWeights& w) {
  if (st.x.size() != st.u.size() || st.dimension() != w.dimension()) {
    std::ostringstream msg;
    msg << "state dimension (" << st.x.size() << ", " << st.u.size() << ") does not match weights (" << w.dimension()
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

double Trajectory::constraint_drift_per_unit_s() const {
  if (diagnostics.empty()) return 0.0;
  const double c0 = diagnostics.front().constraint_residual;
  double drift = 0.0;
  for (const auto& d : diagnostics) drift = std::max(drift, std::abs(d.constraint_residual - c0));
  const double span = samples.back().s - samples.front().s;
  return drift / std::max(1.0, span);
}

double Trajectory::max_abs_shell_residual() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, std::abs(d.shell_residual));
  return m;
}

double Trajectory::max_oracle_deviation() const {
  double m = 0.0;
  for (const auto& d : diagnostics) {
    if (std::isnan(d.oracle_deviation)) return d.oracle_deviation;
    m = std::max(m, d.oracle_deviation);
  }
  return m;
}

double weighted_norm(const WorldlineState& st, const ActionWeights& w) {
  check_dims(st, w);
  double n = 0.0;
  for (int mu = 0; mu < st.dimension(); ++mu) n += w.omega(mu, st.s) * eta(mu) * st.u[mu] * st.u[mu];
  return n;
}

double constraint_residual(const WorldlineState& st, const ActionWeights& w) { return weighted_norm(st, w) + 1.0; }

WorldlineState make_initial_state(const ActionWeights& w, double s0, std::vector<double> x0,
                                  std::span<const double> u_spatial) {
  const int d = w.dimension();
  if (static_cast<int>(x0.size()) != d || static_cast<int>(u_spatial.size()) != d - 1)
    throw std::invalid_argument("initial data: need D coordinates and D-1 spatial velocities");
  WorldlineState st;
  st.s = s0;
  st.x = std::move(x0);
  st.u.assign(static_cast<std::size_t>(d), 0.0);
  double spatial = 0.0;
  for (int i = 1; i < d; ++i) {
    st.u[i] = u_spatial[i - 1];
    spatial += w.omega(i, s0) * st.u[i] * st.u[i];
  }
  st.u[0] = std::sqrt((1.0 + spatial) / w.omega(0, s0));
  return st;
}

PhaseDerivative eom_rhs_isotropic(const WorldlineState& st, const ActionWeights& w) {
  check_dims(st, w);
  if (!w.isotropic()) throw std::invalid_argument("eom_rhs_isotropic needs isotropic weights");
  const double half_omega = 0.5 * w.log_derivative(0, st.s);
  // 𝒟_s(ω̃ u) = 0 → du/ds = -u (Ω/2 + ω̃'/ω̃); the last term vanishes for ω̃ = 1.
  const double damping = half_omega + (w.tilde().is_trivial() ? 0.0 : w.tilde().log_derivative(st.s));
  PhaseDerivative d{std::vector<double>(st.x.size()), std::vector<double>(st.u.size())};
  for (std::size_t mu = 0; mu < st.x.size(); ++mu) {
    d.dx[mu] = st.u[mu] - st.x[mu] * half_omega;
    d.du[mu] = -st.u[mu] * damping;
  }
  return d;
}

PhaseDerivative eom_rhs_anisotropic(const WorldlineState& st, const ActionWeights& w) {
  check_dims(st, w);
  PhaseDerivative d{std::vector<double>(st.x.size()), std::vector<double>(st.u.size())};
  for (int mu = 0; mu < st.dimension(); ++mu) {
    const double half_omega = 0.5 * w.log_derivative(mu, st.s);
    d.dx[mu] = st.u[mu] - st.x[mu] * half_omega;
    d.du[mu] = -st.u[mu] * half_omega;
  }
  return d;
}

namespace {

OdeRhs phase_rhs(const ActionWeights& w, bool isotropic) {
  return [&w, isotropic](double s, std::span<const double> y, std::span<double> dy) {
    const std::size_t d = y.size() / 2;
    WorldlineState st{s, {y.begin(), y.begin() + d}, {y.begin() + d, y.end()}};
    PhaseDerivative pd = isotropic ? eom_rhs_isotropic(st, w) : eom_rhs_anisotropic(st, w);
    std::copy(pd.dx.begin(), pd.dx.end(), dy.begin());
    std::copy(pd.du.begin(), pd.du.end(), dy.begin() + d);
  };
}

std::string drift_dump(const Trajectory& tr, const WorldlineState& st, double residual) {
  std::ostringstream os;
  os.precision(17);
  os << "constraint drift dump\n";
  os << "  s = " << st.s << "  residual = " << residual << "\n  x =";
  for (double v : st.x) os << ' ' << v;
  os << "\n  u =";
  for (double v : st.u) os << ' ' << v;
  os << "\n  omega_mu(s) =";
  for (int mu = 0; mu < tr.weights.dimension(); ++mu) os << ' ' << tr.weights.omega(mu, st.s);
  const std::size_t n = tr.samples.size();
  os << "\n  last samples (s, constraint_residual):";
  for (std::size_t k = n > 5 ? n - 5 : 0; k < n; ++k)
    os << "\n    " << tr.samples[k].s << ' ' << tr.diagnostics[k].constraint_residual;
  os << '\n';
  return os.str();
}

}  // namespace

std::vector<double> integer_picture_map(const WorldlineState& st, const ActionWeights& w) {
  check_dims(st, w);
  std::vector<double> chi(st.x.size());
  for (int mu = 0; mu < st.dimension(); ++mu) chi[mu] = std::sqrt(w.omega(mu, st.s)) * st.x[mu];
  return chi;
}

std::vector<std::vector<double>> integer_picture_map(const Trajectory& tr) {
  std::vector<std::vector<double>> out;
  out.reserve(tr.size());
  for (const auto& st : tr.samples) out.push_back(integer_picture_map(st, tr.weights));
  return out;
}

std::vector<double> integer_picture_oracle(const WorldlineState& initial, const ActionWeights& w, double s) {
  check_dims(initial, w);
  std::vector<double> x(initial.x.size());
  for (int mu = 0; mu < initial.dimension(); ++mu) {
    const double r0 = std::sqrt(w.omega(mu, initial.s));
    const double chi = r0 * initial.x[mu] + r0 * initial.u[mu] * (s - initial.s);
    x[mu] = chi / std::sqrt(w.omega(mu, s));
  }
  return x;
}

Momentum canonical_momentum(const WorldlineState& st, const ActionWeights& w, double m) {
  check_dims(st, w);
  if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
  Momentum mom;
  mom.m = m;
  const std::size_t d = st.u.size();
  mom.p.resize(d);
  mom.p_bar.resize(d);
  if (w.isotropic()) {
    const double wt = w.tilde().at(st.s);
    const double omega = w.omega(0, st.s);
    for (std::size_t mu = 0; mu < d; ++mu) mom.p[mu] = wt * m * st.u[mu];
    mom.m_w = wt * m / std::sqrt(omega);
    for (std::size_t mu = 0; mu < d; ++mu) mom.p_bar[mu] = std::sqrt(omega) * mom.p[mu];
  } else {
    for (std::size_t mu = 0; mu < d; ++mu) {
      mom.p[mu] = m * st.u[mu];
      mom.p_bar[mu] = std::sqrt(w.omega(static_cast<int>(mu), st.s)) * mom.p[mu];
    }
    mom.m_w = m;
  }
  return mom;
}

double shell_residual(const Momentum& mom, const WorldlineState& st, const ActionWeights& w) {
  if (w.isotropic()) return minkowski_dot(mom.p, mom.p) + mom.m_w * mom.m_w;
  double r = mom.m * mom.m;
  for (int mu = 0; mu < st.dimension(); ++mu) r += w.omega(mu, st.s) * eta(mu) * mom.p[mu] * mom.p[mu];
  return r;
}

Trajectory integrate(const WorldlineState& initial, const ActionWeights& w, double mass, double s_end,
                     const IntegrateOptions& opt) {
  check_dims(initial, w);
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  const double c0 = constraint_residual(initial, w);
  if (!(std::abs(c0) <= opt.initial_tolerance)) {
    std::ostringstream msg;
    msg << "initial state is not normalized: omega.u.u + 1 = " << c0;
    throw ValidationError("initial_state", msg.str());
  }

  Trajectory tr;
  tr.weights = w;
  tr.mass = mass;
  const bool check_drift = !w.explore();
  const std::size_t d = initial.x.size();
  std::vector<double> y0(initial.x);
  y0.insert(y0.end(), initial.u.begin(), initial.u.end());

  std::size_t counter = 0;
  WorldlineState pending;
  SampleDiagnostics pending_diag;
  auto observe = [&](double s, std::span<const double> y) {
    WorldlineState st{s, {y.begin(), y.begin() + d}, {y.begin() + d, y.end()}};
    SampleDiagnostics diag;
    diag.constraint_residual = constraint_residual(st, w);
    diag.shell_residual = shell_residual(canonical_momentum(st, w, mass), st, w);
    if (w.tilde().is_trivial()) {
      std::vector<double> ox = integer_picture_oracle(initial, w, s);
      std::vector<double> diff(d);
      for (std::size_t mu = 0; mu < d; ++mu) diff[mu] = st.x[mu] - ox[mu];
      const double scale = inf_norm(ox);
      diag.oracle_deviation = scale > 0.0 ? inf_norm(diff) / scale : inf_norm(diff);
    } else {
      diag.oracle_deviation = std::nan("");
    }
    if (check_drift && !(std::abs(diag.constraint_residual) <= opt.hard_drift_limit)) {
      std::ostringstream msg;
      msg << "normalization drift " << diag.constraint_residual << " exceeds hard limit " << opt.hard_drift_limit
          << " at s = " << s;
      throw ConstraintDriftError(msg.str(), drift_dump(tr, st, diag.constraint_residual));
    }
    if (counter % std::max<std::size_t>(opt.keep_every, 1) == 0) {
      tr.samples.push_back(st);
      tr.diagnostics.push_back(diag);
      pending.x.clear();
    } else {
      pending = std::move(st);
      pending_diag = diag;
    }
    ++counter;
    return true;
  };
  integrate_ode(phase_rhs(w, w.isotropic()), initial.s, s_end, y0, opt.control, observe);
  if (!pending.x.empty()) {
    tr.samples.push_back(std::move(pending));
    tr.diagnostics.push_back(pending_diag);
  }
  return tr;
}

double dirac_multiplier(const WorldlineState& st, const ActionWeights& w, double m) {
  check_dims(st, w);
  const double u2 = minkowski_dot(st.u, st.u);
  if (!(u2 < 0.0)) throw SignatureError("Dirac multiplier: fractional velocity is not timelike");
  return w.omega(0, st.s) / (2.0 * m) * std::sqrt(-u2);
}

double dirac_hamiltonian(const WorldlineState& st, const Momentum& mom, const ActionWeights& w, double m) {
  if (!w.isotropic()) throw std::invalid_argument("Dirac Hamiltonian is defined for isotropic weights");
  return dirac_multiplier(st, w, m) * (minkowski_dot(mom.p, mom.p) + mom.m_w * mom.m_w);
}

std::vector<double> hamilton_flow_velocity(const WorldlineState& st, const Momentum& mom, const ActionWeights& w,
                                           double m) {
  const double f = dirac_multiplier(st, w, m);
  std::vector<double> v(mom.p.size());
  for (std::size_t mu = 0; mu < v.size(); ++mu) v[mu] = 2.0 * f * mom.p[mu];
  return v;
}

PhaseDerivative hamilton_rhs(const WorldlineState& st, const ActionWeights& w, double m) {
  if (!w.isotropic()) throw std::invalid_argument("Hamilton flow is defined for isotropic weights");
  const Momentum mom = canonical_momentum(st, w, m);
  const std::vector<double> v = hamilton_flow_velocity(st, mom, w, m);
  const double half_omega = 0.5 * w.log_derivative(0, st.s);
  PhaseDerivative d{std::vector<double>(st.x.size()), std::vector<double>(st.u.size())};
  for (std::size_t mu = 0; mu < st.x.size(); ++mu) {
    d.dx[mu] = v[mu] - st.x[mu] * half_omega;
    d.du[mu] = -st.u[mu] * half_omega;
  }
  return d;
}

WorldlineState apply_lorentz(const LorentzTransform& t, const WorldlineState& st) {
  return {st.s, t.apply_point(st.x), t.apply_vector(st.u)};
}

Trajectory apply_lorentz(const LorentzTransform& t, const Trajectory& tr) {
  Trajectory out = tr;
  for (auto& st : out.samples) st = apply_lorentz(t, st);
  return out;
}

NonrelativisticReport nonrel_limit_compare(const Trajectory& tr, const MeasureWeight& mw) {
  if (tr.samples.size() < 2) throw std::invalid_argument("nonrelativistic comparison needs at least two samples");
  const ActionWeights& w = tr.weights;
  const int d = w.dimension();
  if (mw.dimension() != d) throw std::invalid_argument("measure and trajectory dimensions differ");

  NonrelativisticReport rep;
  for (const auto& st : tr.samples) {
    const double chi0 = std::sqrt(w.omega(0, st.s)) * st.u[0];
    for (int i = 1; i < d; ++i) {
      const double ratio = std::abs(std::sqrt(w.omega(i, st.s)) * st.u[i] / chi0);
      rep.max_velocity_ratio = std::max(rep.max_velocity_ratio, ratio);
    }
  }
  if (!(rep.max_velocity_ratio < 0.1)) {
    std::ostringstream msg;
    msg << "trajectory is not nonrelativistic: max |dchi^i/dchi^0| = " << rep.max_velocity_ratio;
    throw ValidationError("trajectory", msg.str());
  }

  // 𝒟_t² x^i = 0 as a first-order system in (x^i, y^i = 𝒟_t x^i), weight v0(t).
  const WeightProfile& v0 = mw.profile(0);
  const int n_sp = d - 1;
  OdeRhs rhs = [&v0, n_sp](double t, std::span<const double> y, std::span<double> dy) {
    const double l = v0.sqrt_log_derivative(t);
    for (int i = 0; i < n_sp; ++i) {
      dy[i] = y[n_sp + i] - y[i] * l;
      dy[n_sp + i] = -y[n_sp + i] * l;
    }
  };

  const WorldlineState& first = tr.samples.front();
  std::vector<double> y(static_cast<std::size_t>(2 * n_sp));
  for (int i = 0; i < n_sp; ++i) {
    y[i] = first.x[i + 1];
    y[n_sp + i] = first.u[i + 1];
  }
  double t = first.x[0];
  std::vector<double> next(y.size());
  constexpr double kMaxSubstep = 1e-3;
  for (const auto& st : tr.samples) {
    const double t_target = st.x[0];
    if (t_target < t - 1e-14) throw ValidationError("trajectory", "coordinate time is not increasing along s");
    const double span = t_target - t;
    if (span > 0.0) {
      const auto n = static_cast<std::size_t>(std::ceil(span / kMaxSubstep));
      const double h = span / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        rk4_step(rhs, t + static_cast<double>(k) * h, y, h, next);
        y.swap(next);
      }
      t = t_target;
    }
    double dev = 0.0, disp = 0.0;
    for (int i = 0; i < n_sp; ++i) {
      dev = std::max(dev, std::abs(st.x[i + 1] - y[i]));
      disp = std::max(disp, std::abs(y[i] - first.x[i + 1]));
    }
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.max_displacement = std::max(rep.max_displacement, disp);
    ++rep.samples;
  }
  rep.relative_deviation = rep.max_displacement > 0.0 ? rep.max_deviation / rep.max_displacement : rep.max_deviation;
  return rep;
}

}  // namespace mscale
