#include "mscale/emtensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mscale/calculus.hpp"
#include "mscale/errors.hpp"

namespace mscale {

GridField EnergyMomentumField::mixed(int mu, int nu) const {
  GridField f = upper(mu, nu);
  if (eta(nu) < 0.0) f *= -1.0;
  return f;
}

double EnergyMomentumField::max_asymmetry() const {
  double m = 0.0;
  for (int mu = 0; mu < upper.d; ++mu)
    for (int nu = mu + 1; nu < upper.d; ++nu) m = std::max(m, max_abs(upper(mu, nu) - upper(nu, mu)));
  return m;
}

namespace {

EnergyMomentumField combine(const EnergyMomentumField& a, const EnergyMomentumField& b, double sign) {
  if (a.upper.d != b.upper.d) throw std::invalid_argument("energy-momentum fields differ in dimension");
  EnergyMomentumField r = a;
  r.kind = EnergyMomentumField::Kind::total;
  for (std::size_t k = 0; k < r.upper.comp.size(); ++k) {
    if (sign > 0)
      r.upper.comp[k] += b.upper.comp[k];
    else
      r.upper.comp[k] -= b.upper.comp[k];
  }
  return r;
}

double vector_interior_max(const VectorField& v) {
  double m = 0.0;
  for (const auto& f : v) m = std::max(m, interior_max_abs(f));
  return m;
}

}  // namespace

EnergyMomentumField operator+(const EnergyMomentumField& a, const EnergyMomentumField& b) {
  return combine(a, b, 1.0);
}
EnergyMomentumField operator-(const EnergyMomentumField& a, const EnergyMomentumField& b) {
  return combine(a, b, -1.0);
}

Matrix maxwell_emt_lower(const Matrix& f) {
  const int d = f.rows();
  double f2 = 0.0;  // F^στ F_στ
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) f2 += eta(s) * eta(t) * f(s, t) * f(s, t);
  Matrix t(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      double cross = 0.0;  // F_μ^σ F_νσ
      for (int s = 0; s < d; ++s) cross += f(mu, s) * eta(s) * f(nu, s);
      t(mu, nu) = (mu == nu ? -0.25 * f2 * eta(mu) : 0.0) + cross;
    }
  return t;
}

TensorField sample_field_strength(const GaugeField& field, const GridGeometry& g) {
  const int d = field.dimension();
  if (g.dimension() != d) throw std::invalid_argument("grid and field dimensions differ");
  TensorField f(g, d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::vector<double> x = g.point(i);
    const std::vector<double> fx = field.field_strength<double>(x);
    for (int k = 0; k < d * d; ++k) f.comp[k].values[i] = fx[k];
  }
  return f;
}

EnergyMomentumField maxwell_emt(const TensorField& f_lower, const MeasureWeight& mw) {
  const int d = f_lower.d;
  const GridGeometry& g = f_lower.geometry();
  EnergyMomentumField t{EnergyMomentumField::Kind::maxwell, TensorField(g, d), mw};
  Matrix f(d, d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int mu = 0; mu < d; ++mu)
      for (int nu = 0; nu < d; ++nu) f(mu, nu) = f_lower(mu, nu).values[i];
    const Matrix tl = maxwell_emt_lower(f);
    for (int mu = 0; mu < d; ++mu)
      for (int nu = 0; nu < d; ++nu) t.upper(mu, nu).values[i] = eta(mu) * eta(nu) * tl(mu, nu);
  }
  return t;
}

std::vector<double> maxwell_source(const GaugeField& field, std::span<const double> x) {
  const int d = field.dimension();
  const MeasureWeight& mw = field.measure();
  std::vector<double> j(static_cast<std::size_t>(d), 0.0);
  std::vector<Dual1> xd(x.begin(), x.end());
  for (int nu = 0; nu < d; ++nu) {
    xd[nu].der = 1.0;
    const std::vector<Dual1> f = field.field_strength<Dual1>(xd);
    xd[nu].der = 0.0;
    const double lw = mw.sqrt_log_derivative<double>(nu, x);
    for (int mu = 0; mu < d; ++mu) {
      const Dual1& fmn = f[mu * d + nu];
      j[mu] += eta(mu) * eta(nu) * (fmn.der + fmn.val * lw);
    }
  }
  return j;
}

VectorField sample_maxwell_source(const GaugeField& field, const GridGeometry& g) {
  const int d = field.dimension();
  VectorField j(static_cast<std::size_t>(d), GridField(g));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::vector<double> x = g.point(i);
    const std::vector<double> jx = maxwell_source(field, x);
    for (int mu = 0; mu < d; ++mu) j[mu].values[i] = jx[mu];
  }
  return j;
}

VectorField weighted_divergence(const EnergyMomentumField& t) {
  const int d = t.upper.d;
  const GridGeometry& g = t.upper.geometry();
  VectorField out(static_cast<std::size_t>(d), GridField(g));
  for (int mu = 0; mu < d; ++mu) {
    const auto spec = WeightedOperatorSpec::spacetime(t.measure, mu, Flavor::full_weight);
    for (int nu = 0; nu < d; ++nu) out[nu] += weighted_derivative(spec, t.mixed(mu, nu));
  }
  return out;
}

VectorField current_contraction(const VectorField& j, const TensorField& f) {
  const int d = f.d;
  VectorField out(static_cast<std::size_t>(d), GridField(f.geometry()));
  for (int nu = 0; nu < d; ++nu)
    for (int mu = 0; mu < d; ++mu) out[nu] += j[mu] * f(mu, nu);
  return out;
}

// --- particle history -------------------------------------------------------

ParticleHistory ParticleHistory::from_free(const Trajectory& tr) {
  if (!tr.weights.is_trivial()) throw CompatibilityError("particle history needs trivial action weights (w_mu = 1)");
  if (tr.size() < 2) throw std::invalid_argument("particle history needs at least two samples");
  ParticleHistory h;
  for (const auto& st : tr.samples) {
    h.s_.push_back(st.s);
    h.x_.push_back(st.x);
    h.u_.push_back(st.u);
    h.dx_.push_back(st.u);
    h.du_.emplace_back(st.u.size(), 0.0);
  }
  return h;
}

ParticleHistory ParticleHistory::from_charged(const ChargedTrajectory& ct, const ChargedParticleSpec& spec,
                                              const GaugeField& field) {
  const Trajectory& tr = ct.trajectory;
  if (tr.size() < 2) throw std::invalid_argument("particle history needs at least two samples");
  ParticleHistory h;
  for (const auto& st : tr.samples) {
    PhaseDerivative pd = lorentz_rhs(st, spec, field);
    h.s_.push_back(st.s);
    h.x_.push_back(st.x);
    h.u_.push_back(st.u);
    h.dx_.push_back(std::move(pd.dx));
    h.du_.push_back(std::move(pd.du));
  }
  return h;
}

namespace {

struct Hermite {
  double h00, h10, h01, h11;     // values
  double d00, d10, d01, d11;     // d/ds
};

Hermite hermite_basis(double tau, double len) {
  const double t2 = tau * tau, t3 = t2 * tau;
  Hermite b;
  b.h00 = 2 * t3 - 3 * t2 + 1;
  b.h10 = (t3 - 2 * t2 + tau) * len;
  b.h01 = -2 * t3 + 3 * t2;
  b.h11 = (t3 - t2) * len;
  b.d00 = (6 * t2 - 6 * tau) / len;
  b.d10 = 3 * t2 - 4 * tau + 1;
  b.d01 = (-6 * t2 + 6 * tau) / len;
  b.d11 = 3 * t2 - 2 * tau;
  return b;
}

}  // namespace

ParticleHistory::Instant ParticleHistory::at_time(double t) const {
  const std::size_t n = s_.size();
  if (t < x_.front()[0] - 1e-12 || t > x_.back()[0] + 1e-12) {
    std::ostringstream msg;
    msg << "coordinate time " << t << " outside the worldline [" << x_.front()[0] << ", " << x_.back()[0] << "]";
    throw std::out_of_range(msg.str());
  }
  // x⁰ increases along the worldline (u⁰ > 0).
  std::size_t k = 0;
  {
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (x_[mid][0] <= t)
        lo = mid;
      else
        hi = mid;
    }
    k = lo;
  }
  const double len = s_[k + 1] - s_[k];
  const std::vector<double>&xa = x_[k], &xb = x_[k + 1], &va = dx_[k], &vb = dx_[k + 1];
  auto eval0 = [&](double tau, double& val, double& der) {
    const Hermite b = hermite_basis(tau, len);
    val = b.h00 * xa[0] + b.h10 * va[0] + b.h01 * xb[0] + b.h11 * vb[0];
    der = b.d00 * xa[0] + b.d10 * va[0] + b.d01 * xb[0] + b.d11 * vb[0];
  };
  double lo = 0.0, hi = 1.0;
  double tau = (xb[0] > xa[0]) ? std::clamp((t - xa[0]) / (xb[0] - xa[0]), 0.0, 1.0) : 0.0;
  for (int it = 0; it < 60; ++it) {
    double val, der;
    eval0(tau, val, der);
    const double r = val - t;
    if (std::abs(r) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    if (r > 0)
      hi = tau;
    else
      lo = tau;
    double next = tau - r / (der * len);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - tau) < 1e-17) break;
    tau = next;
  }
  const Hermite b = hermite_basis(tau, len);
  const int d = dimension();
  Instant out{s_[k] + tau * len, std::vector<double>(d), std::vector<double>(d), std::vector<double>(d)};
  std::vector<double> dxds(d);
  for (int mu = 0; mu < d; ++mu) {
    out.x[mu] = b.h00 * xa[mu] + b.h10 * va[mu] + b.h01 * xb[mu] + b.h11 * vb[mu];
    dxds[mu] = b.d00 * xa[mu] + b.d10 * va[mu] + b.d01 * xb[mu] + b.d11 * vb[mu];
    out.u[mu] = b.h00 * u_[k][mu] + b.h10 * du_[k][mu] + b.h01 * u_[k + 1][mu] + b.h11 * du_[k + 1][mu];
  }
  for (int mu = 0; mu < d; ++mu) out.xdot[mu] = dxds[mu] / dxds[0];
  return out;
}

ParticleFields particle_emt(const ParticleHistory& history, double mass, double charge, const MeasureWeight& mw,
                            double sigma, const GridGeometry& g) {
  const int d = g.dimension();
  if (history.dimension() != d || mw.dimension() != d) throw std::invalid_argument("particle_emt: dimension mismatch");
  if (!mw.time_is_trivial()) throw CompatibilityError("particle_emt requires v0(t) = 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const int nt = g.extents[0];
  if (g.coordinate(0, 0) < history.t_min() - 1e-12 || g.coordinate(0, nt - 1) > history.t_max() + 1e-12)
    throw std::out_of_range("grid time range is not covered by the worldline");

  ParticleFields pf;
  pf.rho_m = GridField(g);
  pf.j_m.assign(static_cast<std::size_t>(d), GridField(g));
  pf.j_e.assign(static_cast<std::size_t>(d), GridField(g));
  pf.emt = EnergyMomentumField{EnergyMomentumField::Kind::particle, TensorField(g, d), mw};

  const std::size_t row = g.stride(0);
  std::vector<double> xs(static_cast<std::size_t>(d - 1));
  for (int it = 0; it < nt; ++it) {
    const double t = g.coordinate(0, it);
    const ParticleHistory::Instant p = history.at_time(t);
    const std::vector<double> center(p.x.begin() + 1, p.x.end());
    const SmoothedDelta delta(center, sigma, mw);
    const double e_eff = effective_charge(charge, mw, p.x);
    const double gamma = 1.0 / p.u[0];  // ds/dt
    for (std::size_t j = 0; j < row; ++j) {
      const std::size_t i = static_cast<std::size_t>(it) * row + j;
      const std::vector<double> x = g.point(i);
      std::copy(x.begin() + 1, x.end(), xs.begin());
      const double dv = delta(xs);
      const double rho_m = mass * dv;
      pf.rho_m.values[i] = rho_m;
      for (int mu = 0; mu < d; ++mu) {
        pf.j_m[mu].values[i] = rho_m * p.xdot[mu];
        pf.j_e[mu].values[i] = e_eff * dv * p.xdot[mu];
      }
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
          const double a = rho_m * gamma * p.u[mu] * p.u[nu];
          const double b = pf.j_m[mu].values[i] * p.u[nu];
          pf.emt.upper(mu, nu).values[i] = a;
          pf.form_mismatch = std::max(pf.form_mismatch, std::abs(a - b));
        }
    }
  }
  return pf;
}

MassContinuityReport mass_continuity_residual(const VectorField& j_m, const MeasureWeight& mw) {
  const int d = static_cast<int>(j_m.size());
  if (d < 2 || mw.dimension() != d) throw std::invalid_argument("mass continuity: dimension mismatch");
  const GridGeometry& g = j_m.front().geometry;
  if (g.extents[0] < 2) throw StencilError("mass continuity needs at least two time slices");

  MassContinuityReport rep;
  rep.residual = GridField(g);
  for (int mu = 0; mu < d; ++mu)
    rep.residual += weighted_derivative(WeightedOperatorSpec::spacetime(mw, mu, Flavor::full_weight), j_m[mu]);
  rep.residual_max = interior_max_abs(rep.residual);

  const int nt = g.extents[0];
  rep.slice_mass.assign(static_cast<std::size_t>(nt), 0.0);
  std::vector<double> xs(static_cast<std::size_t>(d - 1));
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = 1.0;
    std::size_t flat = i;
    for (int k = d - 1; k >= 1; --k) {
      const int idx = static_cast<int>(flat % static_cast<std::size_t>(g.extents[k]));
      flat /= static_cast<std::size_t>(g.extents[k]);
      w *= g.spacing[k];
      if (idx == 0 || idx == g.extents[k] - 1) w *= 0.5;
    }
    const std::vector<double> x = g.point(i);
    std::copy(x.begin() + 1, x.end(), xs.begin());
    rep.slice_mass[flat] += w * mw.spatial_value<double>(xs) * j_m[0].values[i];
  }
  const auto [mn, mx] = std::minmax_element(rep.slice_mass.begin(), rep.slice_mass.end());
  const double ref = std::abs(rep.slice_mass.front());
  rep.relative_mass_drift = ref > 0.0 ? (*mx - *mn) / ref : (*mx - *mn);
  return rep;
}

ContinuityReport maxwell_continuity_residual(const TensorField& f_lower, const VectorField& j_e,
                                             const MeasureWeight& mw, double consistency_threshold) {
  const int d = f_lower.d;
  if (static_cast<int>(j_e.size()) != d) throw std::invalid_argument("maxwell continuity: dimension mismatch");
  const EnergyMomentumField t = maxwell_emt(f_lower, mw);
  ContinuityReport rep;
  rep.residual = weighted_divergence(t);
  const VectorField jf = current_contraction(j_e, f_lower);
  for (int nu = 0; nu < d; ++nu) rep.residual[nu] -= jf[nu];
  rep.residual_max = vector_interior_max(rep.residual);

  // Maxwell equations 𝒟_ν F^μν = J^μ on the grid.
  double jmax = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    GridField div(f_lower.geometry());
    for (int nu = 0; nu < d; ++nu) {
      GridField fup = f_lower(mu, nu);
      fup *= eta(mu) * eta(nu);
      div += weighted_derivative(WeightedOperatorSpec::spacetime(mw, nu, Flavor::sqrt_weight), fup);
    }
    rep.maxwell_residual = std::max(rep.maxwell_residual, interior_max_abs(div - j_e[mu]));
    jmax = std::max(jmax, max_abs(j_e[mu]));
  }
  rep.maxwell_consistent = rep.maxwell_residual <= consistency_threshold * (1.0 + jmax);
  return rep;
}

ContinuityReport particle_continuity_residual(const EnergyMomentumField& particle, const VectorField& j_e,
                                              const TensorField& f_lower) {
  ContinuityReport rep;
  rep.residual = weighted_divergence(particle);
  const VectorField jf = current_contraction(j_e, f_lower);
  for (std::size_t nu = 0; nu < rep.residual.size(); ++nu) rep.residual[nu] += jf[nu];
  rep.residual_max = vector_interior_max(rep.residual);
  return rep;
}

CyclicReport cyclic_identity_check(const GaugeField& field, std::span<const double> lo, std::span<const double> hi,
                                   std::size_t count, std::uint64_t seed) {
  const int d = field.dimension();
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("cyclic check: box dimension mismatch");
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  for (int mu = 0; mu < d; ++mu) dist.emplace_back(lo[mu], hi[mu]);

  CyclicReport rep;
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> df(static_cast<std::size_t>(d * d * d));  // ∂_σ F_μν at [σ][μ][ν]
  std::vector<double> lw(static_cast<std::size_t>(d));
  std::vector<double> f;
  for (std::size_t p = 0; p < count; ++p) {
    for (int mu = 0; mu < d; ++mu) x[mu] = dist[mu](rng);
    f = field.field_strength<double>(x);
    std::vector<Dual1> xd(x.begin(), x.end());
    for (int s = 0; s < d; ++s) {
      xd[s].der = 1.0;
      const std::vector<Dual1> fd = field.field_strength<Dual1>(xd);
      xd[s].der = 0.0;
      for (int k = 0; k < d * d; ++k) df[s * d * d + k] = fd[k].der;
      lw[s] = field.measure().sqrt_log_derivative<double>(s, x);
    }
    auto weighted = [&](int s, int mu, int nu, double k) { return df[s * d * d + mu * d + nu] + k * f[mu * d + nu] * lw[s]; };
    for (int s = 0; s < d; ++s)
      for (int mu = s + 1; mu < d; ++mu)
        for (int nu = mu + 1; nu < d; ++nu) {
          for (double k : {1.0, 2.0}) {
            const double c = weighted(s, mu, nu, k) + weighted(mu, nu, s, k) + weighted(nu, s, mu, k);
            double& slot = k == 1.0 ? rep.sqrt_weight_max : rep.full_weight_max;
            slot = std::max(slot, std::abs(c));
          }
        }
    ++rep.points;
  }
  return rep;
}

double self_field_1p1(double e0, double x_p, double sigma, const MeasureWeight& mw, double x) {
  if (mw.dimension() != 2) throw std::invalid_argument("self_field_1p1 is defined in 1+1 dimensions");
  const double z = (x - x_p) / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return e0 * (cdf - 0.5) / std::sqrt(mw.profile(1).value(x));
}

ConvergenceReport convergence_report(std::vector<double> h, std::vector<double> norm) {
  if (h.size() != norm.size() || h.size() < 2) throw std::invalid_argument("convergence report needs >= 2 levels");
  ConvergenceReport r;
  r.h = std::move(h);
  r.norm = std::move(norm);
  for (std::size_t k = 1; k < r.h.size(); ++k)
    r.pairwise_order.push_back(std::log(r.norm[k - 1] / r.norm[k]) / std::log(r.h[k - 1] / r.h[k]));
  const std::size_t n = r.h.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(r.h[k]);
    my += std::log(r.norm[k]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(r.h[k]) - mx;
    sxy += dx * (std::log(r.norm[k]) - my);
    sxx += dx * dx;
  }
  r.order_estimate = sxy / sxx;
  return r;
}

ConvergenceReport maxwell_manufactured_study(const GaugeField& field, std::span<const double> lo,
                                             std::span<const double> hi, std::span<const int> nodes_per_axis) {
  const int d = field.dimension();
  std::vector<double> hs, norms;
  for (int n : nodes_per_axis) {
    std::vector<double> spacing(static_cast<std::size_t>(d));
    for (int mu = 0; mu < d; ++mu) spacing[mu] = (hi[mu] - lo[mu]) / (n - 1);
    GridGeometry g(std::vector<double>(lo.begin(), lo.end()), spacing, std::vector<int>(static_cast<std::size_t>(d), n));
    const TensorField f = sample_field_strength(field, g);
    const VectorField j = sample_maxwell_source(field, g);
    const ContinuityReport rep = maxwell_continuity_residual(f, j, field.measure());
    hs.push_back(spacing[0]);
    norms.push_back(rep.residual_max);
  }
  return convergence_report(hs, norms);
}

TotalConservationLevel total_conservation_level(const ParticleHistory& history, const ChargedParticleSpec& spec,
                                                const GaugeField& external, double sigma, double h,
                                                std::span<const double> times, double half_width) {
  const MeasureWeight& mw = external.measure();
  if (mw.dimension() != 2) throw std::invalid_argument("total conservation study is set up in 1+1 dimensions");
  TotalConservationLevel lvl;
  lvl.sigma = sigma;
  lvl.h = h;
  for (double tc : times) {
    const double xp = history.at_time(tc).x[1];
    const int nx = 2 * static_cast<int>(std::ceil(half_width / h)) + 1;
    const double x0 = xp - h * (nx - 1) / 2;
    GridGeometry g({tc - 2 * h, x0}, {h, h}, {5, nx});

    const ParticleFields pf = particle_emt(history, spec.mass, spec.charge, mw, sigma, g);
    const TensorField f_ext = sample_field_strength(external, g);
    TensorField f_self(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::vector<double> x = g.point(i);
      const double xp_t = history.at_time(x[0]).x[1];
      const double f10 = self_field_1p1(spec.charge, xp_t, sigma, mw, x[1]);
      f_self(1, 0).values[i] = f10;
      f_self(0, 1).values[i] = -f10;
    }
    TensorField f_tot = f_ext;
    for (std::size_t k = 0; k < f_tot.comp.size(); ++k) f_tot.comp[k] += f_self.comp[k];
    const EnergyMomentumField t_field = maxwell_emt(f_tot, mw) - maxwell_emt(f_self, mw);
    const EnergyMomentumField total = pf.emt + t_field;

    lvl.residual_max = std::max(lvl.residual_max, vector_interior_max(weighted_divergence(total)));
    lvl.particle_residual_max =
        std::max(lvl.particle_residual_max, particle_continuity_residual(pf.emt, pf.j_e, f_ext).residual_max);
    VectorField fr = weighted_divergence(t_field);
    const VectorField jf = current_contraction(pf.j_e, f_ext);
    for (std::size_t nu = 0; nu < fr.size(); ++nu) fr[nu] -= jf[nu];
    lvl.maxwell_residual_max = std::max(lvl.maxwell_residual_max, vector_interior_max(fr));
  }
  return lvl;
}

}  // namespace mscale
