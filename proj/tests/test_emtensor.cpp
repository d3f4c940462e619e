#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mscale/emtensor.hpp"
#include "mscale/errors.hpp"
#include "oracles.hpp"

using namespace mscale;

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("Maxwell tensor from E and B") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double E[3] = {u(rng), u(rng), u(rng)}, B[3] = {u(rng), u(rng), u(rng)};
    Matrix F(4, 4);
    for (int i = 0; i < 3; ++i) {
      F(i + 1, 0) = E[i];
      F(0, i + 1) = -E[i];
    }
    F(1, 2) = B[2];
    F(2, 1) = -B[2];
    F(2, 3) = B[0];
    F(3, 2) = -B[0];
    F(3, 1) = B[1];
    F(1, 3) = -B[1];
    const Matrix T = maxwell_emt_lower(F);
    const double e2 = E[0] * E[0] + E[1] * E[1] + E[2] * E[2];
    const double b2 = B[0] * B[0] + B[1] * B[1] + B[2] * B[2];
    CHECK(T(0, 0) == doctest::Approx(0.5 * (e2 + b2)).epsilon(1e-13));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double stress = -(E[i] * E[j] + B[i] * B[j]) + (i == j ? 0.5 * (e2 + b2) : 0.0);
        CHECK(T(i + 1, j + 1) == doctest::Approx(stress).epsilon(1e-12));
      }
    // traceless and symmetric in four dimensions
    double trace = 0.0;
    for (int mu = 0; mu < 4; ++mu) trace += eta(mu) * T(mu, mu);
    CHECK(std::abs(trace) < 1e-13);
    CHECK(T.max_abs_difference(T.transpose()) < 1e-15);
  }
}

TEST_CASE("exact Maxwell source is the weighted divergence of F") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0), WeightProfile::power_law(0.7, 1.0)});
  const GaugeField g({Expr::parse("x1*x2"), Expr::parse("sin(t + x2)"), Expr::parse("t^2 * x1")}, mw);
  const std::vector<double> p{0.4, 0.9, 1.3};
  const auto j = maxwell_source(g, p);
  // J^μ = (1/√v) ∂_ν(√v F^μν) by differences of the sampled F
  for (int mu = 0; mu < 3; ++mu) {
    double acc = 0.0;
    for (int nu = 0; nu < 3; ++nu) {
      auto h = [&](double y) {
        std::vector<double> q = p;
        q[nu] = y;
        const Matrix f = field_strength(g, q);
        return std::sqrt(mw.value<double>(q)) * eta(mu) * eta(nu) * f(mu, nu);
      };
      acc += oracle::central(h, p[nu], 1e-4);
    }
    CHECK(j[mu] == doctest::Approx(acc / std::sqrt(mw.value<double>(p))).epsilon(1e-7));
  }
}

TEST_CASE("weighted EMT divergence balances the Lorentz density at second order") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const GaugeField g({Expr::parse("sin(t)*cos(x1)"), Expr::parse("t*x1^2")}, mw);
  const std::vector<double> lo{0.5, 0.5}, hi{1.5, 1.5};
  const std::vector<int> nodes{24, 48, 96};
  const ConvergenceReport rep = maxwell_manufactured_study(g, lo, hi, nodes);
  CHECK(rep.order_estimate == doctest::Approx(2.0).epsilon(0.1));
  CHECK(rep.norm.back() < rep.norm.front());
}

TEST_CASE("inconsistent Maxwell inputs are flagged") {
  const MeasureWeight mw = MeasureWeight::trivial(2);
  const GaugeField g({Expr::parse("sin(t)*cos(x1)"), Expr::parse("t*x1^2")}, mw);
  GridGeometry geo({0.0, 0.0}, {0.05, 0.05}, {21, 21});
  const TensorField f = sample_field_strength(g, geo);
  VectorField zero(2, GridField(geo));
  // h = 0.05 leaves an O(h²) discretization residual, so flag at 1e-2
  const ContinuityReport rep = maxwell_continuity_residual(f, zero, mw, 1e-2);
  CHECK_FALSE(rep.maxwell_consistent);
  CHECK(rep.maxwell_residual > 1e-3);
  const ContinuityReport ok = maxwell_continuity_residual(f, sample_maxwell_source(g, geo), mw, 1e-2);
  CHECK(ok.maxwell_consistent);
}

TEST_CASE("cyclic identity holds for the sqrt-weight derivative only") {
  const MeasureWeight mw({WeightProfile::binomial(0.5, 1.0), WeightProfile::binomial(0.7, 0.8),
                          WeightProfile::power_law(0.6, 1.0)});
  const GaugeField g({Expr::parse("sin(x1)*x2"), Expr::parse("t*x2^2"), Expr::parse("cos(t + x1)")}, mw);
  const std::vector<double> lo{0.5, 0.5, 0.5}, hi{1.5, 1.5, 1.5};
  const CyclicReport rep = cyclic_identity_check(g, lo, hi, 50, 3);
  CHECK(rep.points == 50);
  CHECK(rep.sqrt_weight_max < 1e-12);
  CHECK(rep.full_weight_max > 1e-3);
  // with v ≡ 1 both agree
  const GaugeField flat({Expr::parse("sin(x1)*x2"), Expr::parse("t*x2^2"), Expr::parse("cos(t + x1)")},
                        MeasureWeight::trivial(3));
  const CyclicReport f = cyclic_identity_check(flat, lo, hi, 50, 3);
  CHECK(f.full_weight_max < 1e-12);
}

TEST_CASE("1+1 self-field satisfies the weighted Gauss law") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const double e0 = 0.7, xp = 1.1, sigma = 0.1;
  CHECK(self_field_1p1(e0, xp, sigma, mw, 1.4) ==
        doctest::Approx(e0 * (normal_cdf(3.0) - 0.5) / std::sqrt(mw.profile(1).value(1.4))));
  const SmoothedDelta delta({xp}, sigma, mw);
  for (double x : {0.9, 1.1, 1.25}) {
    auto h = [&](double y) { return std::sqrt(mw.profile(1).value(y)) * self_field_1p1(e0, xp, sigma, mw, y); };
    const double gauss = oracle::central(h, x) / std::sqrt(mw.profile(1).value(x));
    const double rho = e0 * std::sqrt(mw.profile(1).value(xp)) * delta(std::vector<double>{x});
    CHECK(gauss == doctest::Approx(rho).epsilon(1e-7));
  }
}

TEST_CASE("particle history in coordinate time") {
  const ActionWeights w = ActionWeights::trivial(2);
  const std::vector<double> u_sp{0.75};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.2}, u_sp);
  IntegrateOptions o;
  o.control.step = 0.05;
  const Trajectory tr = integrate(init, w, 1.0, 3.0, o);
  const ParticleHistory h = ParticleHistory::from_free(tr);
  for (double t : {0.1, 1.234, 2.9}) {
    const auto p = h.at_time(t);
    CHECK(p.x[0] == doctest::Approx(t).epsilon(1e-12));
    CHECK(p.x[1] == doctest::Approx(0.2 + 0.6 * t).epsilon(1e-12));  // dx/dt = u/u0 = 0.75/1.25
    CHECK(p.xdot[1] == doctest::Approx(0.6).epsilon(1e-12));
  }
  const Trajectory weighted =
      integrate(make_initial_state(ActionWeights::isotropic(2, ActionProfile::exponential(1.0)), 0.0, {0.0, 0.2}, u_sp),
                ActionWeights::isotropic(2, ActionProfile::exponential(1.0)), 1.0, 1.0, o);
  CHECK_THROWS_AS(ParticleHistory::from_free(weighted), CompatibilityError);
}

TEST_CASE("free particle: dust tensor and mass continuity") {
  const ActionWeights w = ActionWeights::trivial(2);
  const std::vector<double> u_sp{0.5};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 1.0}, u_sp);
  IntegrateOptions o;
  o.control.step = 0.01;
  const ParticleHistory h = ParticleHistory::from_free(integrate(init, w, 2.0, 2.0, o));

  auto run = [&](const MeasureWeight& mw, double sigma, double hx, int nt) {
    const int nx = static_cast<int>(std::lround(1.2 / hx)) + 1;
    GridGeometry g({0.4, 0.6}, {hx, hx}, {nt, nx});
    const ParticleFields pf = particle_emt(h, 2.0, 1.0, mw, sigma, g);
    CHECK(pf.form_mismatch < 1e-12);
    CHECK(pf.emt.max_asymmetry() < 1e-12);
    return mass_continuity_residual(pf.j_m, mw);
  };

  SUBCASE("flat measure: residual is pure discretization error") {
    const MeasureWeight flat = MeasureWeight::trivial(2);
    const MassContinuityReport a = run(flat, 0.08, 0.01, 9), b = run(flat, 0.08, 0.005, 9);
    CHECK(a.relative_mass_drift < 1e-10);
    CHECK(a.residual_max / b.residual_max == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("binomial measure: total mass drift shrinks like sigma^2") {
    const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
    const MassContinuityReport a = run(mw, 0.08, 0.005, 41), b = run(mw, 0.04, 0.0025, 81);
    CHECK(a.relative_mass_drift < 1e-3);
    CHECK(a.relative_mass_drift / b.relative_mass_drift == doctest::Approx(4.0).epsilon(0.25));
  }
}

TEST_CASE("convergence report slope") {
  const ConvergenceReport r = convergence_report({0.1, 0.05, 0.025}, {3e-2, 7.5e-3, 1.875e-3});
  CHECK(r.order_estimate == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(r.pairwise_order.size() == 2);
  CHECK(r.pairwise_order[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS(convergence_report({0.1}, {1.0}));
}
