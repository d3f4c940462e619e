#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mscale/calculus.hpp"
#include "mscale/errors.hpp"
#include "mscale/qtheory.hpp"
#include "oracles.hpp"

using namespace mscale;

TEST_CASE("composite profiles: closed forms") {
  const auto p = CompositeProfile::power(0.5, 2.0);
  CHECK(p.value(0.5) == doctest::Approx(2.0 * std::sqrt(0.25)));
  CHECK(p.value(-0.5) == doctest::Approx(-1.0));
  CHECK(p.invert(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.derivative(0.5) == doctest::Approx(0.5 * std::pow(0.25, -0.5)));
  CHECK_THROWS_AS(p.derivative(0.0), SingularityError);

  const auto m = CompositeProfile::multiscale(0.4, 0.5);
  CHECK(m.value(0.3) == doctest::Approx(0.3 + 0.5 / 0.4 * std::pow(0.6, 0.4)));
  CHECK(m.derivative(0.3) == doctest::Approx(oracle::central([&](double y) { return m.value(y); }, 0.3)).epsilon(1e-8));
  CHECK(CompositeProfile::identity().invert(-3.5) == -3.5);
}

TEST_CASE("composite profiles: inversion round trip (property)") {
  const std::vector<CompositeProfile> profiles{
      CompositeProfile::power(0.5, 2.0), CompositeProfile::power(1.7, 0.3), CompositeProfile::multiscale(0.4, 0.5),
      CompositeProfile::multiscale(2.5, 1.0), CompositeProfile::expression("x2 + 0.3*sin(x2)", 2, -10.0, 10.0)};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const auto& p : profiles)
    for (int k = 0; k < 200; ++k) {
      const double x = u(rng);
      CHECK(std::abs(p.invert(p.value(x)) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("expression profiles are validated") {
  CHECK_THROWS(CompositeProfile::expression("x1 + t", 1, -1.0, 1.0));
  CHECK_THROWS(CompositeProfile::expression("sin(x1)", 1, -3.0, 3.0));
  CHECK_THROWS(CompositeProfile::expression("-x1", 1, -1.0, 1.0));
  const auto e = CompositeProfile::expression("x1^3 + x1", 1, -2.0, 2.0);
  CHECK_THROWS_AS(e.invert(100.0), InversionError);
  CHECK(e.invert(2.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("q geodesics are affine in rho") {
  const CompositeCoordinates cc({CompositeProfile::multiscale(0.6, 1.0), CompositeProfile::power(0.5, 2.0),
                                 CompositeProfile::multiscale(0.4, 0.5)});
  const std::vector<double> x0{0.2, 0.5, -0.3};
  const std::vector<double> sp{0.3, -0.2};
  const std::vector<double> drho = q_normalized_velocity(sp);
  CHECK(oracle::mdot(drho, drho) == doctest::Approx(-1.0).epsilon(1e-15));
  const QTrajectory q = q_geodesic(cc, x0, drho, 0.0, 2.0, 40);
  REQUIRE(q.samples.size() == 41);
  const auto rho0 = cc.to_rho(x0);
  for (const auto& smp : q.samples) {
    const auto rho = cc.to_rho(smp.x);
    for (int mu = 0; mu < 3; ++mu) {
      CHECK(rho[mu] == doctest::Approx(rho0[mu] + smp.s * drho[mu]).epsilon(1e-12));
      // chain rule: dx/ds = (dϱ/ds) / ϱ'(x)
      CHECK(smp.dx_ds[mu] == doctest::Approx(drho[mu] / cc.profile(mu).derivative(smp.x[mu])).epsilon(1e-12));
    }
  }
  const std::vector<double> bad{1.0, 0.2, 0.1};
  CHECK_THROWS_AS(q_geodesic(cc, x0, bad, 0.0, 1.0, 10), ValidationError);
  const std::vector<double> spacelike{0.1, 1.0, 0.0};
  CHECK_THROWS_AS(q_geodesic(cc, x0, spacelike, 0.0, 1.0, 10), SignatureError);
}

TEST_CASE("q line element") {
  const CompositeCoordinates cc({CompositeProfile::identity(), CompositeProfile::power(0.5, 1.0)});
  const std::vector<double> x{0.0, 0.25}, dx{1.0, 0.2};
  // dϱ¹ = ϱ'(x) dx = 0.5·0.25^(-0.5)·0.2 = 0.2
  CHECK(q_line_element(cc, x, dx) == doctest::Approx(std::sqrt(1.0 - 0.04)));
  const std::vector<double> d{1.3, 0.4, -0.2, 0.5};
  const double ds = q_line_element_rho(d);
  for (double phi : {-1.2, 0.3, 2.0}) {
    const auto b = LorentzTransform::boost(4, 3, phi);
    CHECK(q_line_element_rho(b.apply_vector(d)) == doctest::Approx(ds).epsilon(1e-13));
  }
  const std::vector<double> light{1.0, 1.0};
  CHECK_THROWS_AS(q_line_element_rho(light), SignatureError);
}
