#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mscale/cli/scenario.hpp"

namespace mscale::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_parse = 2, exit_validation = 3, exit_runtime = 4 };

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct RunResult {
  std::string scenario;
  Mode mode = Mode::free_isotropic;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  /// Headline error used by sweeps (oracle deviation, affinity error, ...).
  std::string primary_metric;
  double primary_error = 0.0;

  bool passed() const;
  nlohmann::json to_json() const;
};

struct RunOptions {
  bool write_artifacts = true;
};

/// Output directory after the MSCALE_OUTPUT_DIR override.
std::string resolve_output_dir(const Scenario& sc);

/// Runs one scenario; numerical failures propagate as exceptions.
RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

/// σ-sifting error |∫ v δ_v f - f(center)| for f = Π cos(0.7 x^i), by 1D
/// Simpson quadrature per spatial axis over ±10σ (clipped short of a singular origin).
double delta_sifting_error(const MeasureWeight& mw, std::span<const double> center, double sigma);

/// Maps exceptions onto the exit codes and prints a diagnostic to `err`.
int exit_code_for_current_exception(std::ostream& err);

/// `run <file>`: prints a summary to `out`, returns the exit status.
int run_command(const std::string& path, std::ostream& out, std::ostream& err);

struct SweepRow {
  std::string value;
  int status = exit_ok;
  double error = 0.0;
  double ratio = 0.0;  // previous error / this error
  double order = 0.0;  // log(ratio) / log(previous value / value)
  std::string message;
};

/// Runs the scenario once per value of `param` (a section.key), in parallel.
/// Throws ValidationError for an empty value list.
std::vector<SweepRow> sweep(const ConfigTree& base, const std::string& param, const std::vector<std::string>& values);
int sweep_command(const std::string& path, const std::string& param, const std::vector<std::string>& values,
                  std::ostream& out, std::ostream& err);

}  // namespace mscale::cli
