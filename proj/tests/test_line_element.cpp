#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mscale/errors.hpp"
#include "mscale/line_element.hpp"
#include "oracles.hpp"

using namespace mscale;

namespace {

double residual(const std::vector<double>& x, const std::vector<double>& dx, double w, double Om, double ds) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = dx[i] + 0.5 * Om * x[i] * ds;
  return ds * ds + w * oracle::mdot(y, y);
}

// unique positive root by bisection (a > 0, c < 0)
double bisect(const std::vector<double>& x, const std::vector<double>& dx, double w, double Om) {
  double lo = 0.0, hi = 1.0;
  while (residual(x, dx, w, Om, hi) < 0.0) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (residual(x, dx, w, Om, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("explicit line element matches an independent root finder") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x(4), dx(4);
    double sp = 0.0;
    for (int i = 0; i < 4; ++i) x[i] = u(rng);
    for (int i = 1; i < 4; ++i) {
      dx[i] = 0.4 * u(rng);
      sp += dx[i] * dx[i];
    }
    dx[0] = std::sqrt(sp) + 0.05 + std::abs(u(rng));
    const double w = 1.0 + 0.5 * u(rng), Om = 1.5 * u(rng);
    const LineElementInput in{x, dx, w, Om};
    const double ds = ds_isotropic_explicit(in);
    CHECK(ds > 0.0);
    CHECK(ds == doctest::Approx(bisect(x, dx, w, Om)).epsilon(1e-12));
    CHECK(std::abs(ds_isotropic_implicit_residual(in, ds)) < 1e-12);
    CHECK(ds_isotropic_implicit_residual(in, ds) == doctest::Approx(residual(x, dx, w, Om, ds)).epsilon(1e-12));
  }
}

TEST_CASE("static weight gives the scaled Minkowski interval") {
  const std::vector<double> x{0.3, 0.1, 0.2}, dx{1.0, 0.3, -0.4};
  CHECK(ds_isotropic_explicit({x, dx, 2.0, 0.0}) == doctest::Approx(std::sqrt(2.0 * (1.0 - 0.25))));
  CHECK(ds_isotropic_explicit({x, dx, 1.0, 0.0}) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("small Omega is a first-order correction") {
  const std::vector<double> x{0.3, 0.1, 0.2}, dx{1.0, 0.3, -0.4};
  const double ds0 = std::sqrt(-oracle::mdot(dx, dx));
  for (double Om : {1e-2, 1e-3}) {
    const double ds = ds_isotropic_explicit({x, dx, 1.0, Om});
    const double first = ds0 - 0.5 * Om * oracle::mdot(x, dx);
    CHECK(std::abs(ds - first) < 5.0 * Om * Om);
  }
}

TEST_CASE("line element input errors") {
  const std::vector<double> x{0.0, 0.0};
  CHECK_THROWS_AS(ds_isotropic_explicit({x, std::vector<double>{1.0, 1.0}, 1.0, 0.0}), SignatureError);
  CHECK_THROWS_AS(ds_isotropic_explicit({x, std::vector<double>{0.5, 1.0}, 1.0, 0.0}), SignatureError);
  CHECK_THROWS_AS(ds_isotropic_explicit({x, std::vector<double>{1.0, 0.0}, 0.0, 0.0}), SingularityError);
  const std::vector<double> far{2.0, 0.0};
  CHECK_THROWS_AS(ds_isotropic_explicit({far, std::vector<double>{1.0, 0.0}, 1.0, 2.0}), DegenerateGeometryError);
}

TEST_CASE("anisotropic line element and gamma") {
  const std::vector<double> v{0.3, 0.4};
  CHECK(ds_anisotropic(2.0, v, 1.0) == doctest::Approx(2.0 * std::sqrt(0.75)));
  CHECK(ds_anisotropic(1.0, v, 2.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(gamma_factor(v, 1.0) == doctest::Approx(1.0 / std::sqrt(0.75)));
  const std::vector<double> fast{0.8, 0.7};
  CHECK_THROWS_AS(ds_anisotropic(1.0, fast, 1.0), SignatureError);
}
