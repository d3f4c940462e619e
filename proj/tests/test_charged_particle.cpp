#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "mscale/charged_particle.hpp"
#include "mscale/errors.hpp"
#include "oracles.hpp"

using namespace mscale;

namespace {

IntegrateOptions fixed(double step) {
  IntegrateOptions o;
  o.control.step = step;
  return o;
}

ChargedParticleSpec at_rest(const ActionWeights& w, std::vector<double> x0, std::vector<double> u_sp, double m,
                            double e) {
  ChargedParticleSpec spec;
  spec.mass = m;
  spec.charge = e;
  spec.initial = make_initial_state(w, 0.0, std::move(x0), u_sp);
  return spec;
}

}  // namespace

TEST_CASE("uniform electric field: hyperbolic motion from rest") {
  const MeasureWeight mw = MeasureWeight::trivial(2);
  const GaugeField field = GaugeField::uniform_E(mw, 0.5, 1);
  const ActionWeights w = ActionWeights::trivial(2);
  const ChargedParticleSpec spec = at_rest(w, {0.0, 0.0}, {0.0}, 2.0, 3.0);
  const double k = 3.0 * 0.5 / 2.0;
  const ChargedTrajectory ct = integrate_charged(spec, field, w, 4.0, fixed(1e-3));
  for (std::size_t i = 0; i < ct.trajectory.size(); i += 500) {
    const auto& st = ct.trajectory.samples[i];
    CHECK(st.u[0] == doctest::Approx(std::cosh(k * st.s)).epsilon(1e-11));
    CHECK(st.u[1] == doctest::Approx(std::sinh(k * st.s)).epsilon(1e-11));
    CHECK(st.x[0] == doctest::Approx(std::sinh(k * st.s) / k).epsilon(1e-11));
    CHECK(st.x[1] == doctest::Approx((std::cosh(k * st.s) - 1.0) / k).epsilon(1e-11));
  }
  CHECK(ct.trajectory.constraint_drift_per_unit_s() < 1e-9);
  CHECK(ct.trajectory.max_oracle_deviation() < 1e-10);
  CHECK(ct.max_eom_residual() < 1e-9);
}

TEST_CASE("uniform magnetic field: circular orbit") {
  const GaugeField field = GaugeField::uniform_B(MeasureWeight::trivial(4), 2.0);
  const ActionWeights w = ActionWeights::trivial(4);
  const ChargedParticleSpec spec = at_rest(w, {0.0, 0.0, 0.0, 0.0}, {0.5, 0.0, 0.1}, 1.0, 1.0);
  const double om = 2.0;
  const double period = 2.0 * std::acos(-1.0) / om;
  const ChargedTrajectory ct = integrate_charged(spec, field, w, period, fixed(1e-3));
  const auto& last = ct.trajectory.samples.back();
  // back to the start in the plane after one period, drifted along x3
  CHECK(std::abs(last.x[1]) < 1e-10);
  CHECK(std::abs(last.x[2]) < 1e-10);
  CHECK(last.x[3] == doctest::Approx(0.1 * period).epsilon(1e-12));
  // radius |u⊥|/ω: x2 reaches -2·0.25 at half period
  double min_x2 = 0.0;
  for (const auto& st : ct.trajectory.samples) min_x2 = std::min(min_x2, st.x[2]);
  CHECK(min_x2 == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(ct.trajectory.max_oracle_deviation() < 1e-10);
}

TEST_CASE("field strength of presets and of custom potentials") {
  const std::vector<double> x{0.3, 0.7, -0.2, 0.4};
  const Matrix fe = field_strength(GaugeField::uniform_E(MeasureWeight::trivial(4), 1.5, 2), x);
  CHECK(fe(2, 0) == doctest::Approx(1.5));
  CHECK(fe(0, 2) == doctest::Approx(-1.5));
  const Matrix fb = field_strength(GaugeField::uniform_B(MeasureWeight::trivial(4), 0.8), x);
  CHECK(fb(1, 2) == doctest::Approx(0.8));
  CHECK(fb(0, 1) == 0.0);

  // F_μν = (1/√v)[∂_μ(√v A_ν)] - (μ↔ν), by differences
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0), WeightProfile::power_law(0.7, 1.0)});
  const GaugeField g({Expr::parse("x1*x2"), Expr::parse("sin(t + x2)"), Expr::parse("t^2 * x1")}, mw);
  const std::vector<double> p{0.4, 0.9, 1.3};
  const Matrix f = field_strength(g, p);
  auto weighted = [&](int mu, int nu) {
    auto h = [&](double y) {
      std::vector<double> q = p;
      q[mu] = y;
      return std::sqrt(mw.value<double>(q)) * g.potential<double>(nu, q);
    };
    return oracle::central(h, p[mu]) / std::sqrt(mw.value<double>(p));
  };
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu)
      CHECK(f(mu, nu) == doctest::Approx(weighted(mu, nu) - weighted(nu, mu)).epsilon(1e-8));

  // integer picture: ℱ = √v F
  const auto big = g.integer_picture_field_strength(p);
  const double root = std::sqrt(mw.value<double>(p));
  for (int k = 0; k < 9; ++k) CHECK(big[k] == doctest::Approx(root * f.data()[k]).epsilon(1e-12));
}

TEST_CASE("potentials may not depend on s") {
  CHECK_THROWS(GaugeField({Expr::parse("s"), Expr::parse("0")}, MeasureWeight::trivial(2)));
}

TEST_CASE("compatibility condition") {
  const MeasureWeight time_weighted({WeightProfile::binomial(0.5, 1.0), WeightProfile::constant()});
  const MeasureWeight space_weighted({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  CHECK_NOTHROW(check_compatibility(space_weighted, ActionWeights::trivial(2)));
  try {
    check_compatibility(time_weighted, ActionWeights::trivial(2));
    FAIL("expected incompatibility");
  } catch (const CompatibilityError& e) {
    CHECK(std::string(e.what()).find("multiscale only along spatial directions") != std::string::npos);
  }
  CHECK_THROWS_AS(
      check_compatibility(space_weighted, ActionWeights::isotropic(2, ActionProfile::from_expression("(1+s)^2"))),
      CompatibilityError);
  const GaugeField field = GaugeField::uniform_E(time_weighted, 1.0);
  const ActionWeights w = ActionWeights::trivial(2);
  CHECK_THROWS_AS(integrate_charged(at_rest(w, {0.0, 1.0}, {0.0}, 1.0, 1.0), field, w, 1.0), CompatibilityError);
}

TEST_CASE("spatial weight: effective charge enters the force") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const GaugeField field({Expr::parse("0.8*x1"), Expr::parse("0")}, mw);
  const ActionWeights w = ActionWeights::trivial(2);
  const ChargedParticleSpec spec = at_rest(w, {0.0, 1.0}, {0.2}, 1.5, 0.5);
  const std::vector<double> x{0.0, 1.0};
  CHECK(effective_charge(0.5, mw, x) == doctest::Approx(0.5 * std::sqrt(2.0)));
  // F_10 = 0.8 + 0.8 x ∂ln√v; at x = 1: ∂ln√v = (-0.5)/(2·2)
  const double f10 = 0.8 + 0.8 * (-0.125);
  const PhaseDerivative d = lorentz_rhs(spec.initial, spec, field);
  CHECK(d.du[1] == doctest::Approx(0.5 * std::sqrt(2.0) / 1.5 * spec.initial.u[0] * f10));
  CHECK(d.du[0] == doctest::Approx(0.5 * std::sqrt(2.0) / 1.5 * spec.initial.u[1] * f10));

  const ChargedTrajectory ct = integrate_charged(spec, field, w, 2.0, fixed(1e-3));
  CHECK(ct.trajectory.constraint_drift_per_unit_s() < 1e-10);
  CHECK(ct.max_eom_residual() < 1e-9);
  CHECK(std::isnan(ct.trajectory.max_oracle_deviation()));
}

TEST_CASE("xi matrix") {
  const ActionWeights trivial = ActionWeights::trivial(3);
  const std::vector<double> x{0.1, 0.2, 0.3}, xdot{1.2, 0.0, -0.4};
  CHECK(xi_deviation(xi_matrix(trivial, 0.5, x, xdot)) == 0.0);

  const ActionWeights w = ActionWeights::anisotropic(
      {ActionProfile::constant(), ActionProfile::from_expression("(1+s)^2"), ActionProfile::exponential(0.6)});
  const std::vector<double> xd{1.2, 0.5, -0.4};
  const Matrix xi = xi_matrix(w, 0.5, x, xd);
  CHECK(xi(0, 0) == 1.0);
  CHECK(xi(1, 1) == doctest::Approx(1.5 * (0.5 + 0.2 / 1.5) / 0.5));
  CHECK(xi(2, 2) == doctest::Approx(std::exp(0.15) * (-0.4 + 0.3 * 0.3) / -0.4));
  CHECK(xi(0, 1) == 0.0);
  CHECK(xi_deviation(xi) > 0.1);
  CHECK_THROWS_AS(xi_matrix(w, 0.5, x, xdot), DegenerateGeometryError);
}

TEST_CASE("currents from mollified point sources") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const std::vector<PointSource> src{{{1.0}, {0.3}, 2.0, 1.5}, {{2.0}, {-0.1}, -1.0, 0.5}};
  const CurrentPair cp = build_currents(src, mw, 0.02, 0.0);
  const double q = oracle::simpson(
      [&](double x) {
        const std::vector<double> p{x};
        return mw.profile(1).value(x) * cp.charge.density(p);
      },
      0.5, 2.5);
  CHECK(q == doctest::Approx(2.0 * std::sqrt(2.0) - std::sqrt(1.0 + std::pow(2.0, -0.5))).epsilon(1e-3));
  const std::vector<double> at{1.0};
  const auto j = cp.mass.current(at);
  CHECK(j[0] == doctest::Approx(cp.mass.density(at)));
  CHECK(j[1] == doctest::Approx(0.3 * j[0]).epsilon(1e-6));
  CHECK_THROWS(build_currents(src, mw, 0.0, 0.0));
}
