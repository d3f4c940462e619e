#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mscale::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Headline measured value and the bound it was held to.
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json data = nlohmann::json::object();
};

struct VerifyOptions {
  /// Substring matched against criterion names; empty runs everything.
  std::string filter;
  /// Directory of shipped scenario files (constraint and mass-shell sweeps).
  std::string scenario_dir;
};

std::vector<std::string> criterion_names();

/// Runs the acceptance suite. A criterion that throws is reported as failed.
std::vector<CriterionResult> run_verification(const VerifyOptions& opt);

std::string format_criterion_line(const CriterionResult& r);
nlohmann::json verification_json(const std::vector<CriterionResult>& results);

}  // namespace mscale::cli
