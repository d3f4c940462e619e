#include "mscale/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "mscale/calculus.hpp"
#include "mscale/charged_particle.hpp"
#include "mscale/cli/output.hpp"
#include "mscale/cli/runner.hpp"
#include "mscale/cli/scenario.hpp"
#include "mscale/emtensor.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/line_element.hpp"
#include "mscale/qtheory.hpp"

namespace mscale::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---- integer-picture cases (criteria 1 and 12) ----------------------------

struct OracleCase {
  std::string label;
  ActionProfile omega;
};

std::vector<OracleCase> oracle_cases() {
  return {{"(1+s)^2", ActionProfile::shifted_power(1.0, 1.0, 2.0)},
          {"exp(s)", ActionProfile::exponential(1.0)},
          {"binomial", ActionProfile::binomial(0.5, 1.0, 1.0)}};
}

Trajectory oracle_run(const ActionProfile& omega, double step, double drift_limit = 1e-6) {
  const ActionWeights w = ActionWeights::isotropic(4, omega);
  const std::vector<double> u_sp{0.4, -0.1, 0.2};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.3, -0.2, 0.5}, u_sp);
  IntegrateOptions opt;
  opt.control.step = step;
  opt.hard_drift_limit = drift_limit;
  return integrate(init, w, 1.0, 2.0, opt);
}

CriterionResult integer_picture_oracle() {
  CriterionResult r;
  r.threshold = 1e-7;
  r.passed = true;
  std::ostringstream detail;
  for (const auto& c : oracle_cases()) {
    const auto t0 = Clock::now();
    const Trajectory tr = oracle_run(c.omega, 1e-3);
    const double secs = seconds_since(t0);
    const double err = tr.max_oracle_deviation();
    r.value = std::max(r.value, err);
    const bool ok = err < r.threshold && secs < 1.0;
    r.passed = r.passed && ok;
    r.data[c.label] = {{"max_relative_error", err}, {"seconds", secs}};
    detail << c.label << ": " << fmt(err) << " in " << std::fixed << std::setprecision(3) << secs << "s; ";
    detail.unsetf(std::ios::fixed);
  }
  r.detail = detail.str();
  return r;
}

CriterionResult convergence_order() {
  CriterionResult r;
  const std::vector<double> steps{0.2, 0.1, 0.05};
  r.threshold = 0.3;  // |ratio/16 - 1|
  r.passed = true;
  std::ostringstream detail;
  for (const auto& c : oracle_cases()) {
    std::vector<double> errs;
    for (double h : steps) errs.push_back(oracle_run(c.omega, h, 1e-2).max_oracle_deviation());  // coarse on purpose
    json ratios = json::array();
    for (std::size_t k = 1; k < errs.size(); ++k) {
      const double ratio = errs[k - 1] / errs[k];
      const double off = std::abs(ratio / 16.0 - 1.0);
      r.value = std::max(r.value, off);
      r.passed = r.passed && std::isfinite(ratio) && off <= r.threshold;
      ratios.push_back(ratio);
      detail << c.label << " " << fmt(steps[k - 1]) << "->" << fmt(steps[k]) << ": " << fmt(ratio) << "; ";
    }
    r.data[c.label] = {{"steps", steps}, {"errors", errs}, {"ratios", ratios}};
  }
  r.detail = detail.str();
  return r;
}

// ---- shipped scenarios (criteria 2 and 3) ---------------------------------

struct ShippedRun {
  std::string file;
  Scenario scenario;
  RunResult result;
};

std::vector<ShippedRun> shipped_particle_runs(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  if (!dir.empty() && std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ShippedRun> runs;
  for (const auto& f : files) {
    Scenario sc = load_scenario_file(f.string());
    if (sc.mode != Mode::free_isotropic && sc.mode != Mode::free_anisotropic && sc.mode != Mode::charged) continue;
    RunResult res = run_scenario(sc, RunOptions{false});
    runs.push_back({f.filename().string(), std::move(sc), std::move(res)});
  }
  return runs;
}

CriterionResult shipped_metric(const std::string& dir, const char* metric, double threshold, bool scale_by_mass) {
  CriterionResult r;
  r.threshold = threshold;
  const auto runs = shipped_particle_runs(dir);
  if (runs.empty()) {
    r.passed = false;
    r.detail = "no free or charged scenarios found in '" + dir + "'";
    return r;
  }
  r.passed = true;
  std::ostringstream detail;
  for (const auto& run : runs) {
    const double raw = run.result.metrics.at(metric).is_null() ? NAN : run.result.metrics.at(metric).get<double>();
    const double v = scale_by_mass ? raw / (run.scenario.mass * run.scenario.mass) : raw;
    r.value = std::max(r.value, std::isfinite(v) ? v : INFINITY);
    r.passed = r.passed && std::isfinite(v) && v < threshold;
    r.data[run.file] = number_or_null(v);
    detail << run.file << "=" << fmt(v) << " ";
  }
  r.detail = detail.str();
  return r;
}

// ---- criterion 4 ----------------------------------------------------------

CriterionResult line_element_backsubstitution() {
  CriterionResult r;
  r.threshold = 1e-12;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> w_dist(0.5, 2.0);
  std::uniform_real_distribution<double> margin(1.05, 3.0);

  auto timelike = [&](std::vector<double>& dx) {
    double sp = 0.0;
    for (int i = 1; i < 4; ++i) {
      dx[i] = 0.5 * unit(rng);
      sp += dx[i] * dx[i];
    }
    dx[0] = std::sqrt(sp) * margin(rng) + 1e-3;
  };

  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> x(4), dx(4);
    for (double& v : x) v = unit(rng);
    timelike(dx);
    const LineElementInput in{x, dx, w_dist(rng), unit(rng)};
    const double ds = ds_isotropic_explicit(in);
    worst = std::max(worst, std::abs(ds_isotropic_implicit_residual(in, ds)));
  }

  // Ω → 0 at ω = 1: ds = √(-dx·dx) - (Ω/2) x·dx + O(Ω²).
  double limit_worst = 0.0;
  const double small = 1e-4;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(4), dx(4);
    for (double& v : x) v = unit(rng);
    timelike(dx);
    const double ds0 = std::sqrt(-minkowski_dot(dx, dx));
    const double at_zero = ds_isotropic_explicit({x, dx, 1.0, 0.0});
    const double first_order = ds0 - 0.5 * small * minkowski_dot(x, dx);
    const double ds = ds_isotropic_explicit({x, dx, 1.0, small});
    limit_worst = std::max({limit_worst, std::abs(at_zero - ds0), std::abs(ds - first_order) / small});
  }
  const double limit_threshold = 1e-3;
  r.value = worst;
  r.passed = worst < r.threshold && limit_worst < limit_threshold;
  r.data = {{"samples", 1000}, {"max_residual", worst}, {"omega_to_zero_remainder_over_omega", limit_worst}};
  r.detail = "max implicit residual " + fmt(worst) + "; (ds - first-order)/Omega at Omega=1e-4: " + fmt(limit_worst) +
             " (< " + fmt(limit_threshold) + ")";
  return r;
}

// ---- criterion 5 ----------------------------------------------------------

struct ClosedFormCompare {
  double x_dev = 0.0;
  double u_dev = 0.0;
  double drift = 0.0;
  double eom = 0.0;
};

ClosedFormCompare compare_closed_form(const GaugeField& field, const std::vector<double>& x0,
                                      const std::vector<double>& u_sp, double period) {
  const ActionWeights w = ActionWeights::trivial(field.dimension());
  ChargedParticleSpec spec;
  spec.mass = 1.0;
  spec.charge = 1.0;
  spec.initial = make_initial_state(w, 0.0, x0, u_sp);
  IntegrateOptions opt;
  opt.control.step = 1e-3;
  const ChargedTrajectory ct = integrate_charged(spec, field, w, period, opt);
  ClosedFormCompare out;
  for (const auto& st : ct.trajectory.samples) {
    const WorldlineState exact = *charged_closed_form(spec, field, st.s);
    double xs = 1.0, us = 1.0, dx = 0.0, du = 0.0;
    for (std::size_t mu = 0; mu < st.x.size(); ++mu) {
      xs = std::max(xs, std::abs(exact.x[mu]));
      us = std::max(us, std::abs(exact.u[mu]));
      dx = std::max(dx, std::abs(st.x[mu] - exact.x[mu]));
      du = std::max(du, std::abs(st.u[mu] - exact.u[mu]));
    }
    out.x_dev = std::max(out.x_dev, dx / xs);
    out.u_dev = std::max(out.u_dev, du / us);
  }
  out.drift = ct.trajectory.constraint_drift_per_unit_s();
  out.eom = ct.max_eom_residual();
  return out;
}

CriterionResult lorentz_force_standard_limit() {
  CriterionResult r;
  r.threshold = 1e-8;
  const double two_pi = 2.0 * std::acos(-1.0);
  const GaugeField e_field = GaugeField::uniform_E(MeasureWeight::trivial(2), 1.0, 1);
  const GaugeField b_field = GaugeField::uniform_B(MeasureWeight::trivial(4), 1.0);
  const ClosedFormCompare e = compare_closed_form(e_field, {0.0, 0.0}, {0.2}, two_pi);
  const ClosedFormCompare b = compare_closed_form(b_field, {0.0, 0.1, -0.2, 0.3}, {0.3, 0.1, 0.2}, two_pi);
  r.value = std::max({e.x_dev, e.u_dev, e.drift, b.x_dev, b.u_dev, b.drift});
  r.passed = r.value < r.threshold;
  auto j = [](const ClosedFormCompare& c) {
    return json{{"x_relative", c.x_dev}, {"u_relative", c.u_dev}, {"drift_per_unit_s", c.drift}, {"eom_residual", c.eom}};
  };
  r.data = {{"uniform_E", j(e)}, {"uniform_B", j(b)}};
  r.detail = "E: x " + fmt(e.x_dev) + " u " + fmt(e.u_dev) + " drift " + fmt(e.drift) + "; B: x " + fmt(b.x_dev) +
             " u " + fmt(b.u_dev) + " drift " + fmt(b.drift);
  return r;
}

// ---- criterion 6 ----------------------------------------------------------

NonrelativisticReport nonrel_case(double speed) {
  const ActionWeights w = ActionWeights::trivial(2);
  const std::vector<double> u_sp{speed};
  const WorldlineState init = make_initial_state(w, 0.0, {0.0, 0.0}, u_sp);
  IntegrateOptions opt;
  opt.control.step = 1e-3;
  // run until coordinate time 1
  const Trajectory tr = integrate(init, w, 1.0, 1.0 / init.u[0], opt);
  return nonrel_limit_compare(tr, MeasureWeight::trivial(2));
}

CriterionResult nonrelativistic_limit() {
  CriterionResult r;
  r.threshold = 1e-3;
  const NonrelativisticReport a = nonrel_case(0.01);
  const NonrelativisticReport b = nonrel_case(0.005);
  const double ratio = a.relative_deviation / b.relative_deviation;
  r.value = a.relative_deviation;
  r.passed = a.relative_deviation < r.threshold && std::abs(ratio / 4.0 - 1.0) <= 0.25;
  r.data = {{"relative_deviation_0.01", a.relative_deviation},
            {"relative_deviation_0.005", b.relative_deviation},
            {"halving_ratio", ratio}};
  r.detail = "relative deviation " + fmt(a.relative_deviation) + ", halving ratio " + fmt(ratio) + " (4 +- 25%)";
  return r;
}

// ---- criterion 7 ----------------------------------------------------------

GaugeField manufactured_field(const MeasureWeight& mw) {
  return GaugeField({Expr::parse("sin(t)*cos(x1) + 0.5*t*x1^2"), Expr::parse("t^2*x1 + cos(t + x1)")}, mw);
}

CriterionResult maxwell_emt_convergence() {
  CriterionResult r;
  r.threshold = 0.3;
  const std::vector<double> lo{0.5, 0.5}, hi{1.5, 1.5};
  const std::vector<int> nodes{32, 64, 128};
  const auto t0 = Clock::now();
  const MeasureWeight flat = MeasureWeight::trivial(2);
  const MeasureWeight bin({WeightProfile::constant(), WeightProfile::binomial(0.5, 1.0)});
  const ConvergenceReport a = maxwell_manufactured_study(manufactured_field(flat), lo, hi, nodes);
  const ConvergenceReport b = maxwell_manufactured_study(manufactured_field(bin), lo, hi, nodes);
  const double secs = seconds_since(t0);
  r.value = std::max(std::abs(a.order_estimate - 2.0), std::abs(b.order_estimate - 2.0));
  r.passed = r.value <= r.threshold && secs < 30.0;
  r.data = {{"flat", convergence_json(a)}, {"binomial", convergence_json(b)}, {"seconds", secs}};
  r.detail = "order v=1 " + fmt(a.order_estimate) + ", binomial " + fmt(b.order_estimate) + " (2 +- 0.3), " +
             fmt(std::round(secs * 1000) / 1000) + "s";
  return r;
}

// ---- criterion 8 ----------------------------------------------------------

CriterionResult total_conservation() {
  CriterionResult r;
  const MeasureWeight mw = MeasureWeight::trivial(2);
  const GaugeField field = GaugeField::uniform_E(mw, 1.0, 1);
  const ActionWeights w = ActionWeights::trivial(2);
  ChargedParticleSpec spec;
  spec.mass = 1.0;
  spec.charge = 1.0;
  const std::vector<double> u_sp{0.0};
  spec.initial = make_initial_state(w, 0.0, {0.0, 0.3}, u_sp);
  IntegrateOptions opt;
  opt.control.step = 1e-3;
  const ChargedTrajectory ct = integrate_charged(spec, field, w, 1.6, opt);
  const ParticleHistory history = ParticleHistory::from_charged(ct, spec, field);
  const std::vector<double> times{0.5, 1.0, 1.5};
  const std::vector<std::pair<double, double>> levels{{0.2, 0.008}, {0.1, 0.001}, {0.05, 1.25e-4}};

  std::vector<double> residuals;
  json lv = json::array();
  std::ostringstream detail;
  for (const auto& [sigma, h] : levels) {
    const TotalConservationLevel l = total_conservation_level(history, spec, field, sigma, h, times, 8.0 * sigma);
    residuals.push_back(l.residual_max);
    lv.push_back({{"sigma", sigma},
                  {"h", h},
                  {"residual_max", l.residual_max},
                  {"particle_residual_max", l.particle_residual_max},
                  {"maxwell_residual_max", l.maxwell_residual_max}});
    detail << "(" << fmt(sigma) << "," << fmt(h) << ")=" << fmt(l.residual_max) << " ";
  }
  r.passed = true;
  for (std::size_t k = 1; k < residuals.size(); ++k) r.passed = r.passed && residuals[k] < residuals[k - 1];
  r.value = residuals.back();
  r.threshold = residuals.front();
  r.data = {{"levels", lv}};
  r.detail = detail.str() + (r.passed ? "monotone" : "not monotone");
  return r;
}

// ---- criterion 9 ----------------------------------------------------------

CriterionResult cyclic_identity() {
  CriterionResult r;
  r.threshold = 1e-10;
  auto field = [](const MeasureWeight& mw) {
    return GaugeField({Expr::parse("sin(x1)*x2"), Expr::parse("t*x3^2"), Expr::parse("cos(t + x1)"),
                       Expr::parse("x1*x2*x3 + exp(0.3*t)")},
                      mw);
  };
  const MeasureWeight binomial({WeightProfile::binomial(0.5, 1.0), WeightProfile::binomial(0.7, 0.8),
                                WeightProfile::binomial(0.6, 1.2), WeightProfile::binomial(0.8, 0.5)});
  const MeasureWeight multi({WeightProfile::constant(),
                             WeightProfile::multiscale({{0.4, 1.0}, {0.8, 0.3}}),
                             WeightProfile::power_law(0.6, 1.0), WeightProfile::multiscale({{0.5, 2.0}, {0.7, 0.5}})});
  const std::vector<double> lo{0.5, 0.5, 0.5, 0.5}, hi{1.5, 1.5, 1.5, 1.5};
  const CyclicReport a = cyclic_identity_check(field(binomial), lo, hi, 100, 7);
  const CyclicReport b = cyclic_identity_check(field(multi), lo, hi, 100, 8);
  r.value = std::max(a.sqrt_weight_max, b.sqrt_weight_max);
  const double literal = std::max(a.full_weight_max, b.full_weight_max);
  r.passed = r.value < r.threshold && literal > 1e-6;
  r.data = {{"binomial", {{"sqrt_weight_max", a.sqrt_weight_max}, {"full_weight_max", a.full_weight_max}}},
            {"multiscale", {{"sqrt_weight_max", b.sqrt_weight_max}, {"full_weight_max", b.full_weight_max}}}};
  r.detail = "sqrt-weight form " + fmt(r.value) + "; full-weight form " + fmt(a.full_weight_max) + ", " +
             fmt(b.full_weight_max) + " (nonzero as expected)";
  return r;
}

// ---- criterion 10 ---------------------------------------------------------

double max_state_difference(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
    for (std::size_t mu = 0; mu < a.samples[k].x.size(); ++mu)
      m = std::max({m, std::abs(a.samples[k].x[mu] - b.samples[k].x[mu]),
                    std::abs(a.samples[k].u[mu] - b.samples[k].u[mu])});
  if (a.size() != b.size()) m = INFINITY;
  return m;
}

CriterionResult poincare_invariance() {
  CriterionResult r;
  r.threshold = 1e-9;
  const LorentzTransform boost = LorentzTransform::boost(4, 2, 0.4);
  const LorentzTransform poincare(boost.matrix(), {0.5, -1.0, 0.25, 2.0});
  const std::vector<double> u_sp{0.3, -0.2, 0.5};
  IntegrateOptions opt;
  opt.control.step = 1e-3;

  auto gap = [&](const ActionWeights& w) {
    const WorldlineState init = make_initial_state(w, 0.0, {0.1, 0.2, -0.3, 0.4}, u_sp);
    const Trajectory forward = apply_lorentz(poincare, integrate(init, w, 1.0, 3.0, opt));
    const Trajectory boosted = integrate(apply_lorentz(poincare, init), w, 1.0, 3.0, opt);
    return max_state_difference(forward, boosted);
  };
  const double trivial = gap(ActionWeights::trivial(4));
  // a nontrivial isotropic weight keeps Lorentz covariance but loses translations
  const double weighted = gap(ActionWeights::isotropic(4, ActionProfile::shifted_power(1.0, 1.0, 2.0)));
  r.value = trivial;
  r.passed = trivial < r.threshold;
  r.data = {{"trivial_weights", trivial}, {"omega_(1+s)^2", weighted}};
  r.detail = "trivial weights " + fmt(trivial) + "; with omega=(1+s)^2 (logged) " + fmt(weighted);
  return r;
}

// ---- criterion 11 ---------------------------------------------------------

CriterionResult qtheory_check() {
  CriterionResult r;
  r.threshold = 1e-12;
  const CompositeCoordinates cc({CompositeProfile::multiscale(0.6, 1.0), CompositeProfile::power(0.5, 2.0),
                                 CompositeProfile::multiscale(0.4, 0.5),
                                 CompositeProfile::expression("x3 + 0.3*sin(x3)", 3, -10.0, 10.0)});
  const std::vector<double> x0{0.2, 0.5, -0.3, 0.7};
  const std::vector<double> sp{0.3, -0.2, 0.4};
  const std::vector<double> drho = q_normalized_velocity(sp);
  const QTrajectory q = q_geodesic(cc, x0, drho, 0.0, 2.0, 200);
  const std::vector<double> rho0 = cc.to_rho(x0);

  double affinity = 0.0;
  for (const auto& smp : q.samples) {
    const std::vector<double> rho = cc.to_rho(smp.x);
    for (int mu = 0; mu < 4; ++mu) {
      const double expected = rho0[mu] + smp.s * drho[mu];
      affinity = std::max(affinity, std::abs(rho[mu] - expected) / std::max(1.0, std::abs(expected)));
    }
  }

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  double round_trip = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> x(4);
    for (double& v : x) v = coord(rng);
    const std::vector<double> back = cc.to_x(cc.to_rho(x));
    for (int mu = 0; mu < 4; ++mu)
      round_trip = std::max(round_trip, std::abs(back[mu] - x[mu]) / std::max(1.0, std::abs(x[mu])));
  }

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> axis(1, 3);
  double invariance = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> d(4);
    double s2 = 0.0;
    for (int i = 1; i < 4; ++i) {
      d[i] = 0.5 * unit(rng);
      s2 += d[i] * d[i];
    }
    d[0] = std::sqrt(s2) + 0.1 + std::abs(unit(rng));
    const LorentzTransform L = LorentzTransform::boost(4, axis(rng), 1.5 * unit(rng));
    const double a = q_line_element_rho(d);
    const double b = q_line_element_rho(L.apply_vector(d));
    invariance = std::max(invariance, std::abs(a - b) / a);
  }
  r.value = std::max({affinity, round_trip, invariance});
  r.passed = r.value <= r.threshold;
  r.data = {{"affinity", affinity}, {"round_trip", round_trip}, {"line_element_invariance", invariance}};
  r.detail = "affinity " + fmt(affinity) + ", round trip " + fmt(round_trip) + ", ds invariance " + fmt(invariance);
  return r;
}

struct Entry {
  const char* name;
  std::function<CriterionResult(const VerifyOptions&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"integer_picture_oracle", [](const VerifyOptions&) { return integer_picture_oracle(); }},
      {"constraint_preservation",
       [](const VerifyOptions& o) { return shipped_metric(o.scenario_dir, "constraint_drift_per_unit_s", 1e-8, false); }},
      {"mass_shell",
       [](const VerifyOptions& o) { return shipped_metric(o.scenario_dir, "max_shell_residual", 1e-8, true); }},
      {"line_element_backsubstitution", [](const VerifyOptions&) { return line_element_backsubstitution(); }},
      {"lorentz_force_standard_limit", [](const VerifyOptions&) { return lorentz_force_standard_limit(); }},
      {"nonrelativistic_limit", [](const VerifyOptions&) { return nonrelativistic_limit(); }},
      {"maxwell_emt_convergence", [](const VerifyOptions&) { return maxwell_emt_convergence(); }},
      {"total_conservation", [](const VerifyOptions&) { return total_conservation(); }},
      {"cyclic_identity", [](const VerifyOptions&) { return cyclic_identity(); }},
      {"poincare_invariance", [](const VerifyOptions&) { return poincare_invariance(); }},
      {"qtheory", [](const VerifyOptions&) { return qtheory_check(); }},
      {"convergence_order", [](const VerifyOptions&) { return convergence_order(); }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> criterion_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& opt) {
  std::vector<CriterionResult> results;
  int id = 0;
  for (const auto& e : registry()) {
    ++id;
    if (!opt.filter.empty() && std::string(e.name).find(opt.filter) == std::string::npos) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = e.run(opt);
    } catch (const std::exception& ex) {
      r = CriterionResult{};
      r.passed = false;
      r.value = NAN;
      r.detail = std::string("error: ") + ex.what();
    }
    r.id = id;
    r.name = e.name;
    r.seconds = seconds_since(t0);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_criterion_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << std::setfill('0') << r.id << std::setfill(' ') << ' '
     << std::left << std::setw(30) << r.name << ' ' << std::right << std::fixed << std::setprecision(2)
     << std::setw(6) << r.seconds << "s  " << r.detail;
  return os.str();
}

json verification_json(const std::vector<CriterionResult>& results) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["criteria"] = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"passed", r.passed},
                             {"value", number_or_null(r.value)},
                             {"threshold", number_or_null(r.threshold)},
                             {"seconds", r.seconds},
                             {"detail", r.detail},
                             {"data", r.data}});
  }
  j["passed"] = all;
  return j;
}

}  // namespace mscale::cli
