#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mscale/dual.hpp"
#include "mscale/errors.hpp"
#include "mscale/expr.hpp"
#include "mscale/measure.hpp"
#include "oracles.hpp"

using namespace mscale;

TEST_CASE("expression parser: precedence and functions") {
  CHECK(Expr::parse("1 + 2*3^2").eval_at(Var::s, 0.0) == doctest::Approx(19.0));
  CHECK(Expr::parse("2^3^2").eval_at(Var::s, 0.0) == doctest::Approx(512.0));
  CHECK(Expr::parse("-2^2").eval_at(Var::s, 0.0) == doctest::Approx(-4.0));
  CHECK(Expr::parse("(1 + s)^2").eval_at(Var::s, 2.0) == doctest::Approx(9.0));
  VarArray<double> v{0.3, 1.2, -0.7, 2.0, 0.5};
  const double expected = std::sin(0.3) * std::cosh(1.2) + std::sqrt(std::abs(-0.7)) - std::log(2.0) / std::exp(0.5) +
                          std::tanh(0.3) * std::sinh(0.5) * std::cos(2.0);
  CHECK(Expr::parse("sin(t)*cosh(x1) + sqrt(abs(x2)) - log(x3)/exp(s) + tanh(x0)*sinh(s)*cos(x3)").eval(v) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("expression parser: dependencies and errors") {
  const Expr e = Expr::parse("x1*s + 3");
  CHECK(e.depends_on(Var::x1));
  CHECK(e.depends_on(Var::s));
  CHECK_FALSE(e.depends_on(Var::t));
  CHECK(Expr::parse("2*3").is_constant());
  CHECK_THROWS_AS(Expr::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(s)"), ParseError);
  CHECK_THROWS_AS(Expr::parse("(s"), ParseError);
  CHECK_THROWS_AS(Expr::parse("y"), ParseError);
}

TEST_CASE("expression derivatives through duals match differences") {
  const Expr e = Expr::parse("exp(0.3*s)*sin(s^2) + abs(s - 4)^0.5");
  for (double s : {0.1, 0.7, 1.9}) {
    const Dual1 d = e.eval_at(Var::s, Dual1(s, 1.0));
    CHECK(d.val == doctest::Approx(e.eval_at(Var::s, s)));
    CHECK(d.der == doctest::Approx(oracle::central([&](double y) { return e.eval_at(Var::s, y); }, s)).epsilon(1e-8));
  }
}

TEST_CASE("weight profiles: closed forms") {
  CHECK(WeightProfile::constant().value(3.7) == 1.0);
  const auto p = WeightProfile::power_law(0.5, 2.0);
  CHECK(p.value(0.8) == doctest::Approx(std::pow(0.4, -0.5)));
  CHECK(p.value(-0.8) == doctest::Approx(std::pow(0.4, -0.5)));
  const auto b = WeightProfile::binomial(0.3, 1.5);
  CHECK(b.value(0.9) == doctest::Approx(1.0 + std::pow(0.6, -0.7)));
  const auto m = WeightProfile::multiscale({{0.4, 1.0}, {0.8, 0.3}});
  CHECK(m.value(0.6) == doctest::Approx(1.0 + std::pow(0.6, -0.6) + std::pow(2.0, -0.2)));
}

TEST_CASE("weight profiles: log-derivative of sqrt weight matches differences") {
  const std::vector<WeightProfile> profiles{WeightProfile::power_law(0.5, 2.0), WeightProfile::binomial(0.3, 1.5),
                                            WeightProfile::multiscale({{0.4, 1.0}, {0.8, 0.3}}),
                                            WeightProfile::power_law(1.0, 1.0)};
  for (const auto& p : profiles)
    for (double x : {-1.3, 0.4, 2.2}) {
      const double fd = oracle::central([&](double y) { return 0.5 * std::log(p.value(y)); }, x);
      CHECK(p.sqrt_log_derivative(x) == doctest::Approx(fd).epsilon(1e-8));
      const Dual1 dv = p.value(Dual1(x, 1.0));
      CHECK(dv.der / (2 * dv.val) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("weight profiles: singular origin is guarded") {
  const auto p = WeightProfile::power_law(0.5, 1.0, 1e-3);
  CHECK_THROWS_AS(p.value(0.0), SingularityError);
  CHECK_THROWS_AS(p.value(5e-4), SingularityError);
  CHECK_NOTHROW(p.value(2e-3));
  CHECK_THROWS_AS(WeightProfile::binomial(0.5, 1.0).sqrt_log_derivative(0.0), SingularityError);
  CHECK(WeightProfile::binomial(0.5, 1.0).is_singular_at_origin());
  CHECK_FALSE(WeightProfile::power_law(1.0, 1.0).is_singular_at_origin());
  CHECK_THROWS_AS(WeightProfile::power_law(1.5, 1.0), std::invalid_argument);
}

TEST_CASE("measure weight factorizes") {
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0),
                          WeightProfile::power_law(0.7, 2.0)});
  const std::vector<double> x{0.4, 1.3, -0.6};
  const double expected = (1.0 + std::pow(1.3, -0.5)) * std::pow(0.3, -0.3);
  CHECK(mw.value<double>(x) == doctest::Approx(expected));
  const std::vector<double> sp{1.3, -0.6};
  CHECK(mw.spatial_value<double>(sp) == doctest::Approx(expected));
  CHECK(mw.time_is_trivial());
  CHECK_FALSE(mw.is_trivial());
  CHECK(MeasureWeight::trivial(4).is_trivial());
}

TEST_CASE("smoothed delta sifts with the weighted measure") {
  // ∫ dx v(x) δ_v(x, x0) f(x) → f(x0) as σ → 0, with error O(σ²)
  const MeasureWeight mw({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const double x0 = 1.2;
  auto sift = [&](double sigma) {
    const SmoothedDelta d({x0}, sigma, mw);
    return oracle::simpson(
        [&](double x) {
          const std::vector<double> p{x};
          return mw.profile(1).value(x) * d(p) * std::cos(x);
        },
        x0 - 10 * sigma, x0 + 10 * sigma);
  };
  const double e1 = std::abs(sift(0.04) - std::cos(x0));
  const double e2 = std::abs(sift(0.02) - std::cos(x0));
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));

  // trivial weight: unit mass
  const SmoothedDelta flat({0.0}, 0.1, MeasureWeight::trivial(2));
  CHECK(oracle::simpson([&](double x) { return flat(std::vector<double>{x}); }, -2, 2) ==
        doctest::Approx(1.0).epsilon(1e-10));
}
