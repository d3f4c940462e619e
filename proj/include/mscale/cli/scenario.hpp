#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mscale/action_weights.hpp"
#include "mscale/charged_particle.hpp"
#include "mscale/free_particle.hpp"
#include "mscale/measure.hpp"
#include "mscale/qtheory.hpp"

namespace mscale::cli {

enum class Mode { free_isotropic, free_anisotropic, charged, qtheory, emt_verify };

const char* mode_name(Mode m);

/// Raw sectioned key/value view of a scenario file. Section names may contain
/// dots ("measure.1"), so lookups never split on them.
class ConfigTree {
 public:
  using Section = std::map<std::string, std::string>;

  static ConfigTree parse_file(const std::string& path);
  static ConfigTree parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has_section(const std::string& s) const { return sections_.count(s) != 0; }
  const Section* section(const std::string& s) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

  /// Sets "section.key" (the split point is chosen so the section exists).
  void set(const std::string& dotted_key, const std::string& value);
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, Section> sections_;
  std::string origin_;
};

struct Thresholds {
  double constraint_drift = 1e-8;  // per unit s
  double shell = 1e-8;             // times m²
  double oracle = 1e-7;            // relative
  double eom = 1e-9;
  double qtheory = 1e-12;
  double order_target = 2.0;
  double order_tolerance = 0.3;
  double cyclic = 1e-10;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::free_isotropic;
  int dimension = 2;
  std::string origin;

  MeasureWeight measure;
  ActionWeights weights;

  double mass = 1.0;
  double charge = 0.0;
  std::vector<double> position;  // D
  std::vector<double> velocity;  // D-1 spatial u (or dϱ/ds in q-theory)
  std::optional<GaugeField> field;

  double s_start = 0.0;
  double s_end = 1.0;
  IntegrateOptions integrate;

  // emt_verify
  std::vector<int> grid_nodes{32, 64, 128};
  std::vector<double> domain_lo, domain_hi;
  double sigma = 0.0;
  std::size_t cyclic_points = 100;
  std::uint64_t seed = 1;

  // qtheory
  std::vector<CompositeProfile> q_profiles;
  std::size_t q_intervals = 200;

  Thresholds thresholds;
  std::string output_dir = "out";
  std::string prefix;
};

/// Throws ParseError (malformed file / values) or ValidationError (missing or
/// inconsistent keys; all missing keys are named in one message).
Scenario load_scenario(const ConfigTree& tree);
Scenario load_scenario_file(const std::string& path);

}  // namespace mscale::cli
