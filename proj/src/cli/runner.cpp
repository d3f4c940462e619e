#include "mscale/cli/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "mscale/calculus.hpp"
#include "mscale/charged_particle.hpp"
#include "mscale/cli/output.hpp"
#include "mscale/emtensor.hpp"
#include "mscale/errors.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/qtheory.hpp"

namespace mscale::cli {

using nlohmann::json;

bool RunResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json RunResult::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = scenario;
  j["mode"] = mode_name(mode);
  j["status"] = passed() ? "pass" : "fail";
  j["metrics"] = metrics;
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"value", number_or_null(c.value)}, {"threshold", c.threshold}, {"passed", c.passed}});
  j["artifacts"] = artifacts;
  return j;
}

std::string resolve_output_dir(const Scenario& sc) {
  if (const char* env = std::getenv("MSCALE_OUTPUT_DIR"); env && *env) return env;
  return sc.output_dir;
}

namespace {

void add_check(RunResult& r, const std::string& name, double value, double threshold) {
  r.checks.push_back({name, value, threshold, std::isfinite(value) && value <= threshold});
}

std::string artifact_path(const Scenario& sc, const std::string& suffix) {
  return (std::filesystem::path(resolve_output_dir(sc)) / (sc.prefix + suffix)).string();
}

json state_json(const WorldlineState& st) { return {{"s", st.s}, {"x", st.x}, {"u", st.u}}; }

void trajectory_checks(RunResult& r, const Scenario& sc, const Trajectory& tr) {
  const double drift = tr.constraint_drift_per_unit_s();
  const double shell = tr.max_abs_shell_residual();
  const double oracle = tr.max_oracle_deviation();
  r.metrics["samples"] = tr.size();
  r.metrics["constraint_drift_per_unit_s"] = number_or_null(drift);
  r.metrics["max_shell_residual"] = number_or_null(shell);
  r.metrics["max_oracle_deviation"] = number_or_null(oracle);
  r.metrics["initial"] = state_json(tr.samples.front());
  r.metrics["final"] = state_json(tr.samples.back());
  r.metrics["explore"] = sc.weights.explore();
  if (!sc.weights.explore()) {
    add_check(r, "constraint_drift", drift, sc.thresholds.constraint_drift);
    add_check(r, "mass_shell", shell, sc.thresholds.shell * sc.mass * sc.mass);
  }
  if (std::isfinite(oracle)) add_check(r, "oracle_deviation", oracle, sc.thresholds.oracle);
  r.primary_metric = std::isfinite(oracle) ? "oracle_deviation" : "constraint_drift_per_unit_s";
  r.primary_error = std::isfinite(oracle) ? oracle : drift;
}

void run_free(RunResult& r, const Scenario& sc, const RunOptions& opt) {
  const WorldlineState init = make_initial_state(sc.weights, sc.s_start, sc.position, sc.velocity);
  const Trajectory tr = integrate(init, sc.weights, sc.mass, sc.s_end, sc.integrate);
  trajectory_checks(r, sc, tr);
  if (opt.write_artifacts) {
    std::ostringstream csv;
    write_trajectory_csv(csv, tr);
    const auto path = artifact_path(sc, "_trajectory.csv");
    write_file(path, csv.str());
    r.artifacts.push_back(path);
  }
}

void run_charged(RunResult& r, const Scenario& sc, const RunOptions& opt) {
  ChargedParticleSpec spec;
  spec.mass = sc.mass;
  spec.charge = sc.charge;
  spec.initial = make_initial_state(sc.weights, sc.s_start, sc.position, sc.velocity);
  const ChargedTrajectory ct = integrate_charged(spec, *sc.field, sc.weights, sc.s_end, sc.integrate);
  trajectory_checks(r, sc, ct.trajectory);
  const double eom = ct.max_eom_residual();
  r.metrics["max_eom_residual"] = number_or_null(eom);
  add_check(r, "eom_residual", eom, sc.thresholds.eom);
  if (opt.write_artifacts) {
    std::ostringstream csv;
    write_trajectory_csv(csv, ct.trajectory, &ct.eom_residual);
    const auto path = artifact_path(sc, "_trajectory.csv");
    write_file(path, csv.str());
    r.artifacts.push_back(path);
  }
}

void run_qtheory(RunResult& r, const Scenario& sc, const RunOptions& opt) {
  const CompositeCoordinates cc(sc.q_profiles);
  const std::vector<double> drho = q_normalized_velocity(sc.velocity);
  const QTrajectory q = q_geodesic(cc, sc.position, drho, sc.s_start, sc.s_end, sc.q_intervals);
  const std::vector<double> rho0 = cc.to_rho(sc.position);
  const int d = cc.dimension();

  std::vector<double> affinity(q.samples.size(), 0.0);
  double round_trip = 0.0, invariance = 0.0;
  const LorentzTransform boost = LorentzTransform::boost(d, 1, 0.3);
  for (std::size_t k = 0; k < q.samples.size(); ++k) {
    const QSample& smp = q.samples[k];
    const std::vector<double> rho = cc.to_rho(smp.x);
    const std::vector<double> back = cc.to_x(rho);
    for (int mu = 0; mu < d; ++mu) {
      const double expected = rho0[mu] + (smp.s - sc.s_start) * drho[mu];
      affinity[k] = std::max(affinity[k], std::abs(rho[mu] - expected) / std::max(1.0, std::abs(expected)));
      round_trip = std::max(round_trip, std::abs(back[mu] - smp.x[mu]) / std::max(1.0, std::abs(smp.x[mu])));
    }
    if (k > 0) {
      std::vector<double> step(static_cast<std::size_t>(d));
      for (int mu = 0; mu < d; ++mu) step[mu] = smp.rho[mu] - q.samples[k - 1].rho[mu];
      const double ds = q_line_element_rho(step);
      const double ds_boost = q_line_element_rho(boost.apply_vector(step));
      invariance = std::max(invariance, std::abs(ds_boost - ds) / ds);
    }
  }
  const double affinity_max = *std::max_element(affinity.begin(), affinity.end());
  r.metrics["samples"] = q.samples.size();
  r.metrics["affinity_error"] = affinity_max;
  r.metrics["round_trip_error"] = round_trip;
  r.metrics["line_element_invariance"] = invariance;
  add_check(r, "geodesic_affinity", affinity_max, sc.thresholds.qtheory);
  add_check(r, "inversion_round_trip", round_trip, sc.thresholds.qtheory);
  add_check(r, "line_element_invariance", invariance, sc.thresholds.qtheory);
  r.primary_metric = "affinity_error";
  r.primary_error = affinity_max;
  if (opt.write_artifacts) {
    std::ostringstream csv;
    write_q_csv(csv, q, affinity, sc.mass);
    const auto path = artifact_path(sc, "_trajectory.csv");
    write_file(path, csv.str());
    r.artifacts.push_back(path);
  }
}

void run_emt(RunResult& r, const Scenario& sc, const RunOptions& opt) {
  const GaugeField& field = *sc.field;
  const ConvergenceReport conv = maxwell_manufactured_study(field, sc.domain_lo, sc.domain_hi, sc.grid_nodes);
  r.metrics["convergence"] = convergence_json(conv);
  add_check(r, "maxwell_emt_order", std::abs(conv.order_estimate - sc.thresholds.order_target),
            sc.thresholds.order_tolerance);
  r.primary_metric = "finest_norm";
  r.primary_error = conv.norm.back();

  if (sc.cyclic_points > 0) {
    const CyclicReport cyc = cyclic_identity_check(field, sc.domain_lo, sc.domain_hi, sc.cyclic_points, sc.seed);
    r.metrics["cyclic"] = {{"sqrt_weight_max", cyc.sqrt_weight_max},
                           {"full_weight_max", cyc.full_weight_max},
                           {"points", cyc.points}};
    add_check(r, "cyclic_identity", cyc.sqrt_weight_max, sc.thresholds.cyclic);
  }
  if (sc.sigma > 0.0) {
    std::vector<double> center;
    for (int i = 1; i < sc.dimension; ++i) center.push_back(0.5 * (sc.domain_lo[i] + sc.domain_hi[i]));
    const double sift = delta_sifting_error(sc.measure, center, sc.sigma);
    r.metrics["sifting"] = {{"sigma", sc.sigma}, {"error", number_or_null(sift)}};
    r.primary_metric = "sifting_error";
    r.primary_error = sift;
  }
  if (opt.write_artifacts) {
    std::ostringstream csv;
    write_convergence_csv(csv, conv, sc.grid_nodes);
    const auto path = artifact_path(sc, "_convergence.csv");
    write_file(path, csv.str());
    r.artifacts.push_back(path);
  }
}

}  // namespace

double delta_sifting_error(const MeasureWeight& mw, std::span<const double> center, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  constexpr int kIntervals = 4000;  // even, Simpson
  double integral = 1.0, exact = 1.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    const WeightProfile& v = mw.profile(static_cast<int>(i) + 1);
    const double c = center[i];
    double half = 10.0 * sigma;
    if (v.is_singular_at_origin() && half >= std::abs(c)) half = 0.99 * std::abs(c);
    const double lo = c - half;
    const double h = 2.0 * half / kIntervals;
    const double vc = v.value(c);
    double acc = 0.0;
    for (int k = 0; k <= kIntervals; ++k) {
      const double x = lo + k * h;
      const double vx = v.value(x);
      const double f = vx * gaussian_kernel(x - c, sigma) / std::sqrt(vx * vc) * std::cos(0.7 * x);
      acc += f * (k == 0 || k == kIntervals ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    integral *= acc * h / 3.0;
    exact *= std::cos(0.7 * c);
  }
  return std::abs(integral - exact);
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
  RunResult r;
  r.scenario = sc.name;
  r.mode = sc.mode;
  switch (sc.mode) {
    case Mode::free_isotropic:
    case Mode::free_anisotropic: run_free(r, sc, opt); break;
    case Mode::charged: run_charged(r, sc, opt); break;
    case Mode::qtheory: run_qtheory(r, sc, opt); break;
    case Mode::emt_verify: run_emt(r, sc, opt); break;
  }
  if (opt.write_artifacts) {
    const auto path = artifact_path(sc, "_report.json");
    r.artifacts.push_back(path);
    write_file(path, r.to_json().dump(2) + "\n");
  }
  return r;
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_parse;
  } catch (const ValidationError& e) {
    err << "validation error [" << e.field() << "]: " << e.what() << '\n';
    return exit_validation;
  } catch (const ConstraintDriftError& e) {
    err << "runtime error: " << e.what() << '\n' << e.dump() << '\n';
    return exit_runtime;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return exit_runtime;
  }
}

int run_command(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario_file(path);
    const RunResult r = run_scenario(sc);
    out << "scenario " << r.scenario << " (" << mode_name(r.mode) << ")\n";
    for (const auto& c : r.checks)
      out << "  " << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(26) << c.name << ' '
          << format_double(c.value) << " <= " << format_double(c.threshold) << '\n';
    for (const auto& a : r.artifacts) out << "  wrote " << a << '\n';
    return r.passed() ? exit_ok : exit_check_failed;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

namespace {

double parse_number(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ValidationError("values", "sweep value '" + s + "' is not a number");
  return v;
}

}  // namespace

std::vector<SweepRow> sweep(const ConfigTree& base, const std::string& param, const std::vector<std::string>& values) {
  if (values.empty()) throw ValidationError("values", "sweep needs at least one value");
  std::vector<double> numeric;
  for (const auto& v : values) numeric.push_back(parse_number(v));
  {
    ConfigTree probe = base;
    probe.set(param, values.front());
  }

  std::vector<std::future<SweepRow>> jobs;
  for (const auto& v : values) {
    jobs.push_back(std::async(std::launch::async, [&base, &param, v] {
      SweepRow row;
      row.value = v;
      std::ostringstream err;
      try {
        ConfigTree tree = base;
        tree.set(param, v);
        const RunResult r = run_scenario(load_scenario(tree), RunOptions{false});
        row.error = r.primary_error;
        row.status = r.passed() ? exit_ok : exit_check_failed;
        row.message = r.primary_metric;
      } catch (...) {
        row.status = exit_code_for_current_exception(err);
        row.error = std::numeric_limits<double>::quiet_NaN();
        row.message = err.str();
        if (!row.message.empty() && row.message.back() == '\n') row.message.pop_back();
      }
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].ratio = rows[k].order = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    rows[k].ratio = rows[k - 1].error / rows[k].error;
    rows[k].order = std::log(rows[k].ratio) / std::log(numeric[k - 1] / numeric[k]);
  }
  return rows;
}

int sweep_command(const std::string& path, const std::string& param, const std::vector<std::string>& values,
                  std::ostream& out, std::ostream& err) {
  try {
    const ConfigTree tree = ConfigTree::parse_file(path);
    const std::vector<SweepRow> rows = sweep(tree, param, values);
    out << "sweep " << param << " over " << rows.size() << " values";
    if (!rows.empty() && rows.front().status <= exit_check_failed) out << " (error = " << rows.front().message << ")";
    out << '\n';
    out << std::left << std::setw(14) << "value" << std::setw(8) << "status" << std::setw(24) << "error"
        << std::setw(24) << "ratio" << "order\n";
    int worst = exit_ok;
    for (const auto& r : rows) {
      out << std::left << std::setw(14) << r.value << std::setw(8) << r.status << std::setw(24)
          << format_double(r.error) << std::setw(24) << format_double(r.ratio) << format_double(r.order) << '\n';
      if (r.status > exit_check_failed) err << "value " << r.value << ": " << r.message << '\n';
      worst = std::max(worst, r.status);
    }
    return worst;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace mscale::cli
