#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mscale/errors.hpp"
#include "mscale/free_particle.hpp"
#include "oracles.hpp"

using namespace mscale;

namespace {

IntegrateOptions fixed(double step) {
  IntegrateOptions o;
  o.control.step = step;
  return o;
}

// x(s) = (√ω(0) x(0) + √ω(0) u(0) s) / √ω(s), for a weight with known √ω
std::vector<double> closed_form(double (*sqrt_w)(double), const WorldlineState& init, double s) {
  std::vector<double> x(init.x.size());
  for (std::size_t mu = 0; mu < x.size(); ++mu)
    x[mu] = sqrt_w(init.s) * (init.x[mu] + init.u[mu] * (s - init.s)) / sqrt_w(s);
  return x;
}

}  // namespace

TEST_CASE("trivial weights give straight lines") {
  const ActionWeights w = ActionWeights::trivial(3);
  const std::vector<double> u_sp{0.3, -0.4};
  const WorldlineState init = make_initial_state(w, 0.0, {1.0, 2.0, 3.0}, u_sp);
  CHECK(init.u[0] == doctest::Approx(std::sqrt(1.25)));
  const Trajectory tr = integrate(init, w, 1.0, 1.0, fixed(0.1));
  CHECK(tr.size() == 11);
  const auto& last = tr.samples.back();
  CHECK(last.s == 1.0);
  CHECK(last.x[1] == doctest::Approx(2.3).epsilon(1e-14));
  CHECK(last.x[2] == doctest::Approx(2.6).epsilon(1e-14));
  CHECK(last.u[1] == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("isotropic (1+s)^2 weight against the closed form") {
  const ActionWeights w = ActionWeights::isotropic(2, ActionProfile::from_expression("(1+s)^2"));
  const std::vector<double> u_sp{0.6};
  const WorldlineState init = make_initial_state(w, 0.0, {0.1, -0.4}, u_sp);
  // ω u·u = -1 at s=0 (ω = 1)
  CHECK(init.u[0] == doctest::Approx(std::sqrt(1.36)));
  const Trajectory tr = integrate(init, w, 1.0, 2.0, fixed(1e-3));
  for (std::size_t k = 0; k < tr.size(); k += 250) {
    const auto ex = closed_form([](double s) { return 1.0 + s; }, init, tr.samples[k].s);
    CHECK(oracle::max_abs_diff(tr.samples[k].x, ex) < 1e-12);
  }
  // frozen endpoint of the closed form: x1(2) = (-0.4 + 1.2)/3
  CHECK(tr.samples.back().x[1] == doctest::Approx(0.8 / 3.0).epsilon(1e-12));
  CHECK(tr.max_oracle_deviation() < 1e-12);
}

TEST_CASE("integer picture map straightens the worldline") {
  const ActionWeights w = ActionWeights::isotropic(3, ActionProfile::exponential(0.7));
  const std::vector<double> u_sp{0.2, 0.5};
  const WorldlineState init = make_initial_state(w, 0.3, {0.0, 1.0, -1.0}, u_sp);
  const Trajectory tr = integrate(init, w, 1.0, 2.3, fixed(1e-3));
  const auto chi = integer_picture_map(tr);
  // second differences of χ vanish
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < chi.size(); ++k)
    for (std::size_t mu = 0; mu < 3; ++mu) worst = std::max(worst, std::abs(chi[k + 1][mu] - 2 * chi[k][mu] + chi[k - 1][mu]));
  CHECK(worst < 1e-12);
}

TEST_CASE("constraint and mass shell are preserved (property)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const std::vector<ActionProfile> omegas{ActionProfile::shifted_power(1.0, 1.0, 2.0), ActionProfile::exponential(1.0),
                                          ActionProfile::binomial(0.5, 1.0, 1.0),
                                          ActionProfile::from_expression("2 + sin(3*s)")};
  for (const auto& om : omegas)
    for (int k = 0; k < 5; ++k) {
      const ActionWeights w = ActionWeights::isotropic(4, om);
      const std::vector<double> u_sp{u(rng), u(rng), u(rng)};
      const WorldlineState init = make_initial_state(w, 0.0, {u(rng), u(rng), u(rng), u(rng)}, u_sp);
      const double m = 0.5 + std::abs(u(rng));
      const Trajectory tr = integrate(init, w, m, 2.0, fixed(1e-3));
      CHECK(tr.constraint_drift_per_unit_s() < 1e-10);
      CHECK(tr.max_abs_shell_residual() < 1e-10 * m * m);
    }
}

TEST_CASE("anisotropic weights: per-direction closed form and dispersion") {
  const ActionWeights w = ActionWeights::anisotropic({ActionProfile::constant(), ActionProfile::shifted_power(1.0, 0.5, 2.0),
                                                      ActionProfile::exponential(0.3)});
  const std::vector<double> u_sp{0.3, -0.2};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.2, 0.1}, u_sp);
  const Trajectory tr = integrate(init, w, 2.0, 2.0, fixed(1e-3));
  const WorldlineState& last = tr.samples.back();
  // χ_μ = √ω_μ x^μ affine: x¹(2) = (0.2 + 0.3·2)/(1 + 0.5·2), x²(2) = (0.1 - 0.4)/e^0.3
  CHECK(last.x[1] == doctest::Approx(0.8 / 2.0).epsilon(1e-12));
  CHECK(last.x[2] == doctest::Approx(-0.3 / std::exp(0.3)).epsilon(1e-12));
  CHECK(last.x[0] == doctest::Approx(2.0 * init.u[0]).epsilon(1e-12));
  CHECK(tr.max_abs_shell_residual() < 1e-10 * 4.0);
  CHECK(tr.constraint_drift_per_unit_s() < 1e-10);
}

TEST_CASE("anisotropic with equal weights reproduces isotropic") {
  const ActionProfile om = ActionProfile::from_expression("(1+s)^2");
  const ActionWeights iso = ActionWeights::isotropic(3, om);
  const ActionWeights an = ActionWeights::anisotropic({om, om, om});
  const std::vector<double> u_sp{0.1, 0.4};
  const WorldlineState init = make_initial_state(iso, 0.0, {0.0, 0.5, 0.5}, u_sp);
  const Trajectory a = integrate(init, iso, 1.0, 1.0, fixed(1e-2));
  const Trajectory b = integrate(init, an, 1.0, 1.0, fixed(1e-2));
  CHECK(oracle::max_abs_diff(a.samples.back().x, b.samples.back().x) < 1e-14);
}

TEST_CASE("Dirac Hamiltonian flow") {
  const std::vector<double> u_sp{0.3, 0.4};
  SUBCASE("trivial weight: H_D generates the same flow as the equations of motion") {
    const ActionWeights w = ActionWeights::trivial(3);
    const WorldlineState st = make_initial_state(w, 0.0, {0.1, 0.2, 0.3}, u_sp);
    const PhaseDerivative a = hamilton_rhs(st, w, 1.5);
    const PhaseDerivative b = eom_rhs_isotropic(st, w);
    CHECK(oracle::max_abs_diff(a.dx, b.dx) < 1e-14);
    CHECK(oracle::max_abs_diff(a.du, b.du) < 1e-14);
    const Momentum mom = canonical_momentum(st, w, 1.5);
    CHECK(std::abs(dirac_hamiltonian(st, mom, w, 1.5)) < 1e-14);
  }
  SUBCASE("general weight: 2fp = sqrt(w) u") {
    const ActionWeights w = ActionWeights::isotropic(3, ActionProfile::from_expression("(1+s)^2"));
    const WorldlineState st = make_initial_state(w, 0.5, {0.1, 0.2, 0.3}, u_sp);
    const Momentum mom = canonical_momentum(st, w, 2.0);
    const auto v = hamilton_flow_velocity(st, mom, w, 2.0);
    for (int mu = 0; mu < 3; ++mu) CHECK(v[mu] == doctest::Approx(1.5 * st.u[mu]));
    CHECK(std::abs(shell_residual(mom, st, w)) < 1e-14);
  }
}

TEST_CASE("exploration mode adds the tilde damping") {
  const ActionWeights w =
      ActionWeights::trivial(2).with_tilde(ActionProfile::from_expression("exp(0.5*s)"), true);
  CHECK(w.explore());
  const WorldlineState st{0.0, {0.0, 0.0}, {std::sqrt(1.25), 0.5}};
  const PhaseDerivative d = eom_rhs_isotropic(st, w);
  CHECK(d.du[1] == doctest::Approx(-0.25));
  const Trajectory tr = integrate(st, w, 1.0, 1.0, fixed(1e-2));
  CHECK(std::isnan(tr.max_oracle_deviation()));
  CHECK_THROWS(ActionWeights::trivial(2).with_tilde(ActionProfile::from_expression("exp(0.5*s)"), false));
}

TEST_CASE("integration errors") {
  const ActionWeights w = ActionWeights::trivial(2);
  const WorldlineState bad{0.0, {0.0, 0.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(integrate(bad, w, 1.0, 1.0), ValidationError);

  const ActionWeights steep = ActionWeights::isotropic(2, ActionProfile::exponential(8.0));
  const std::vector<double> u_sp{3.0};
  const WorldlineState init = make_initial_state(steep, 0.0, {0.0, 0.0}, u_sp);
  IntegrateOptions o = fixed(0.5);
  o.hard_drift_limit = 1e-9;
  try {
    integrate(init, steep, 1.0, 4.0, o);
    FAIL("expected a drift abort");
  } catch (const ConstraintDriftError& e) {
    CHECK(e.dump().find("residual") != std::string::npos);
  }
}

TEST_CASE("boost commutes with integration at trivial weights") {
  const ActionWeights w = ActionWeights::trivial(4);
  const LorentzTransform L(LorentzTransform::boost(4, 1, -0.9).matrix(), {1.0, 0.0, -2.0, 0.5});
  const std::vector<double> u_sp{0.2, 0.1, -0.3};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.1, 0.2, 0.3}, u_sp);
  const Trajectory a = apply_lorentz(L, integrate(init, w, 1.0, 2.0, fixed(1e-2)));
  const Trajectory b = integrate(apply_lorentz(L, init), w, 1.0, 2.0, fixed(1e-2));
  CHECK(oracle::max_abs_diff(a.samples.back().x, b.samples.back().x) < 1e-12);
  CHECK(oracle::max_abs_diff(a.samples.back().u, b.samples.back().u) < 1e-12);
}

TEST_CASE("nonrelativistic comparison") {
  const ActionWeights w = ActionWeights::trivial(2);
  for (double v : {0.02, 0.01}) {
    const std::vector<double> u_sp{v};
    const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.0}, u_sp);
    const Trajectory tr = integrate(init, w, 1.0, 1.0 / init.u[0], fixed(1e-3));
    const NonrelativisticReport rep = nonrel_limit_compare(tr, MeasureWeight::trivial(2));
    // relativistic x = u t/γ against x = u t
    CHECK(rep.relative_deviation == doctest::Approx(1.0 - 1.0 / std::sqrt(1.0 + v * v)).epsilon(1e-6));
  }
  const std::vector<double> fast{0.5};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.0}, fast);
  const Trajectory tr = integrate(init, w, 1.0, 1.0, fixed(1e-2));
  CHECK_THROWS_AS(nonrel_limit_compare(tr, MeasureWeight::trivial(2)), ValidationError);
}

TEST_CASE("adaptive stepping reaches the endpoint within tolerance") {
  const ActionWeights w = ActionWeights::isotropic(2, ActionProfile::exponential(1.0));
  const std::vector<double> u_sp{0.4};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.3}, u_sp);
  IntegrateOptions o;
  o.control.adaptive = true;
  o.control.tolerance = 1e-11;
  const Trajectory tr = integrate(init, w, 1.0, 2.0, o);
  CHECK(tr.samples.back().s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tr.size() < 2000);
  CHECK(tr.max_oracle_deviation() < 1e-8);
}
