#include "mscale/cli/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mscale/errors.hpp"

namespace mscale::cli {

namespace pt = boost::property_tree;

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::free_isotropic: return "free_isotropic";
    case Mode::free_anisotropic: return "free_anisotropic";
    case Mode::charged: return "charged";
    case Mode::qtheory: return "qtheory";
    case Mode::emt_verify: return "emt_verify";
  }
  return "?";
}

namespace {

ConfigTree from_ptree(const pt::ptree& tree, std::map<std::string, ConfigTree::Section>& out) {
  for (const auto& [name, child] : tree) {
    if (child.empty()) throw ParseError("key '" + name + "' appears outside any [section]");
    auto& sec = out[name];
    for (const auto& [key, value] : child) sec[key] = value.get_value<std::string>();
  }
  return {};
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigTree ConfigTree::parse_string(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << origin << ":" << e.line() << ": " << e.message();
    throw ParseError(msg.str());
  }
  ConfigTree c;
  c.origin_ = origin;
  from_ptree(tree, c.sections_);
  return c;
}

ConfigTree ConfigTree::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

const ConfigTree::Section* ConfigTree::section(const std::string& s) const {
  auto it = sections_.find(s);
  return it == sections_.end() ? nullptr : &it->second;
}

std::optional<std::string> ConfigTree::get(const std::string& section, const std::string& key) const {
  const Section* s = this->section(section);
  if (!s) return std::nullopt;
  auto it = s->find(key);
  if (it == s->end()) return std::nullopt;
  return trim(it->second);
}

void ConfigTree::set(const std::string& dotted, const std::string& value) {
  // Prefer the longest existing section prefix; otherwise split at the first dot.
  std::size_t chosen = std::string::npos;
  for (std::size_t pos = dotted.find('.'); pos != std::string::npos; pos = dotted.find('.', pos + 1))
    if (sections_.count(dotted.substr(0, pos))) chosen = pos;
  if (chosen == std::string::npos) chosen = dotted.find('.');
  if (chosen == std::string::npos || chosen == 0 || chosen + 1 == dotted.size())
    throw ValidationError(dotted, "parameter '" + dotted + "' must have the form section.key");
  sections_[dotted.substr(0, chosen)][dotted.substr(chosen + 1)] = value;
}

namespace {

class Reader {
 public:
  explicit Reader(const ConfigTree& t) : t_(t) {}

  std::optional<std::string> raw(const std::string& sec, const std::string& key) const { return t_.get(sec, key); }

  std::string str(const std::string& sec, const std::string& key) {
    auto v = raw(sec, key);
    if (!v) {
      missing(sec, key);
      return {};
    }
    return *v;
  }
  std::string str_or(const std::string& sec, const std::string& key, const std::string& def) const {
    return raw(sec, key).value_or(def);
  }

  double num(const std::string& sec, const std::string& key) {
    auto v = raw(sec, key);
    if (!v) {
      missing(sec, key);
      return 0.0;
    }
    return to_double(sec, key, *v);
  }
  double num_or(const std::string& sec, const std::string& key, double def) const {
    auto v = raw(sec, key);
    return v ? to_double(sec, key, *v) : def;
  }

  std::vector<double> list(const std::string& sec, const std::string& key) {
    auto v = raw(sec, key);
    if (!v) {
      missing(sec, key);
      return {};
    }
    return to_list(sec, key, *v);
  }
  std::vector<double> list_or(const std::string& sec, const std::string& key, std::vector<double> def) const {
    auto v = raw(sec, key);
    return v ? to_list(sec, key, *v) : def;
  }

  bool flag_or(const std::string& sec, const std::string& key, bool def) const {
    auto v = raw(sec, key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ParseError(sec + "." + key + ": expected a boolean, got '" + *v + "'");
  }

  void missing(const std::string& sec, const std::string& key) { missing_.push_back(sec + "." + key); }
  void require_section(const std::string& sec) {
    if (!t_.has_section(sec)) missing_.push_back("[" + sec + "]");
  }

  void finish() const {
    if (missing_.empty()) return;
    std::ostringstream msg;
    msg << t_.origin() << ": missing required key" << (missing_.size() > 1 ? "s" : "") << ":";
    for (const auto& m : missing_) msg << ' ' << m;
    throw ValidationError(missing_.front(), msg.str());
  }

  static double to_double(const std::string& sec, const std::string& key, const std::string& v) {
    double d = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, d);
    if (ec != std::errc() || p != e) throw ParseError(sec + "." + key + ": expected a number, got '" + v + "'");
    return d;
  }

  static std::vector<double> to_list(const std::string& sec, const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(to_double(sec, key, item));
    }
    return out;
  }

 private:
  const ConfigTree& t_;
  std::vector<std::string> missing_;
};

Mode parse_mode(const std::string& s) {
  if (s == "free_isotropic") return Mode::free_isotropic;
  if (s == "free_anisotropic") return Mode::free_anisotropic;
  if (s == "charged") return Mode::charged;
  if (s == "qtheory") return Mode::qtheory;
  if (s == "emt_verify") return Mode::emt_verify;
  throw ValidationError("scenario.mode", "scenario.mode: unknown mode '" + s +
                                             "' (free_isotropic, free_anisotropic, charged, qtheory, emt_verify)");
}

template <class F>
auto validated(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(field, field + ": " + e.what());
  }
}

WeightProfile load_profile(Reader& r, const std::string& sec) {
  const std::string kind = r.str_or(sec, "kind", "constant");
  const double eps = r.num_or(sec, "epsilon", 0.0);
  return validated(sec, [&] {
    if (kind == "constant") return WeightProfile::constant();
    if (kind == "power_law")
      return WeightProfile::power_law(r.num_or(sec, "alpha", 1.0), r.num_or(sec, "length_scale", 1.0), eps);
    if (kind == "binomial") {
      auto terms = r.raw(sec, "terms");
      if (!terms)
        return WeightProfile::binomial(r.num_or(sec, "alpha", 1.0), r.num_or(sec, "length_scale", 1.0), eps);
      // terms = alpha:length, alpha:length, ...
      std::vector<ScaleTerm> list;
      std::stringstream ss(*terms);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError(sec + ".terms: expected alpha:length pairs");
        list.push_back({Reader::to_double(sec, "terms", trim(item.substr(0, colon))),
                        Reader::to_double(sec, "terms", trim(item.substr(colon + 1)))});
      }
      return WeightProfile::multiscale(std::move(list), eps);
    }
    throw ValidationError(sec + ".kind", sec + ".kind: unknown profile kind '" + kind +
                                             "' (constant, power_law, binomial)");
  });
}

ActionProfile load_action(const std::string& field, const std::string& text) {
  return validated(field, [&] { return ActionProfile::from_expression(text); });
}

CompositeProfile load_q_profile(Reader& r, const std::string& sec, int mu) {
  const std::string kind = r.str_or(sec, "kind", "identity");
  return validated(sec, [&] {
    if (kind == "identity") return CompositeProfile::identity();
    if (kind == "power") return CompositeProfile::power(r.num(sec, "alpha"), r.num_or(sec, "length_scale", 1.0));
    if (kind == "multiscale")
      return CompositeProfile::multiscale(r.num(sec, "alpha"), r.num_or(sec, "length_scale", 1.0));
    if (kind == "expression")
      return CompositeProfile::expression(r.str(sec, "expr"), mu, r.num(sec, "lo"), r.num(sec, "hi"));
    throw ValidationError(sec + ".kind", sec + ".kind: unknown composite kind '" + kind +
                                             "' (identity, power, multiscale, expression)");
  });
}

}  // namespace

Scenario load_scenario(const ConfigTree& tree) {
  Reader r(tree);
  Scenario sc;
  sc.origin = tree.origin();
  r.require_section("scenario");
  sc.name = r.str_or("scenario", "name", "scenario");
  const std::string mode = r.str("scenario", "mode");
  sc.dimension = static_cast<int>(r.num_or("scenario", "dimension", 2));
  sc.seed = static_cast<std::uint64_t>(r.num_or("scenario", "seed", 1));
  r.finish();
  sc.mode = parse_mode(mode);
  const int d = sc.dimension;
  if (d < 2 || d > 4) throw ValidationError("scenario.dimension", "scenario.dimension must be 2, 3 or 4");

  std::vector<WeightProfile> profiles;
  for (int mu = 0; mu < d; ++mu) profiles.push_back(load_profile(r, "measure." + std::to_string(mu)));
  sc.measure = MeasureWeight(std::move(profiles));

  // Action weights.
  const bool explore = r.flag_or("weights", "explore", false);
  if (auto iso = r.raw("weights", "omega")) {
    sc.weights = ActionWeights::isotropic(d, load_action("weights.omega", *iso));
  } else {
    std::vector<ActionProfile> dirs;
    for (int mu = 0; mu < d; ++mu) {
      const std::string key = "omega." + std::to_string(mu);
      dirs.push_back(load_action("weights." + key, r.str_or("weights", key, "1")));
    }
    sc.weights = sc.mode == Mode::free_isotropic ? ActionWeights::isotropic(d, dirs[0])
                                                 : ActionWeights::anisotropic(std::move(dirs));
  }
  if (auto tilde = r.raw("weights", "tilde"))
    sc.weights = validated("weights.tilde", [&] { return sc.weights.with_tilde(load_action("weights.tilde", *tilde), explore); });

  // Particle.
  const bool needs_particle = sc.mode != Mode::emt_verify;
  if (needs_particle) {
    r.require_section("particle");
    if (sc.mode != Mode::qtheory) sc.mass = r.num("particle", "mass");
    sc.position = r.list("particle", "position");
    sc.velocity = r.list("particle", "velocity");
  }
  if (sc.mode == Mode::charged) sc.charge = r.num("particle", "charge");

  // Numerics.
  sc.s_start = r.num_or("numerics", "s_start", 0.0);
  if (needs_particle) sc.s_end = r.num("numerics", "s_end");
  sc.integrate.control.step = r.num_or("numerics", "step", 1e-3);
  sc.integrate.control.adaptive = r.flag_or("numerics", "adaptive", false);
  sc.integrate.control.tolerance = r.num_or("numerics", "tolerance", 1e-10);
  sc.integrate.control.min_step = r.num_or("numerics", "min_step", 1e-9);
  sc.integrate.control.max_step = r.num_or("numerics", "max_step", 0.1);
  sc.integrate.hard_drift_limit = r.num_or("numerics", "hard_drift_limit", 1e-6);
  sc.integrate.keep_every = static_cast<std::size_t>(r.num_or("numerics", "keep_every", 1));
  sc.q_intervals = static_cast<std::size_t>(r.num_or("numerics", "intervals", 200));
  sc.sigma = r.num_or("numerics", "sigma", 0.0);
  sc.cyclic_points = static_cast<std::size_t>(r.num_or("numerics", "cyclic_points", 100));

  // Field.
  if (sc.mode == Mode::charged || sc.mode == Mode::emt_verify) {
    r.require_section("field");
    const std::string preset = r.str_or("field", "preset", "custom");
    if (preset == "uniform_E") {
      const double e = r.num("field", "strength");
      const int axis = static_cast<int>(r.num_or("field", "axis", 1));
      r.finish();
      sc.field = validated("field", [&] { return GaugeField::uniform_E(sc.measure, e, axis); });
    } else if (preset == "uniform_B") {
      const double b = r.num("field", "strength");
      r.finish();
      sc.field = validated("field", [&] { return GaugeField::uniform_B(sc.measure, b); });
    } else if (preset == "custom") {
      std::vector<Expr> comps;
      for (int mu = 0; mu < d; ++mu) {
        const std::string key = "A" + std::to_string(mu);
        const std::string text = r.str_or("field", key, "0");
        comps.push_back(Expr::parse(text));
      }
      sc.field = validated("field", [&] { return GaugeField(std::move(comps), sc.measure); });
    } else {
      throw ValidationError("field.preset", "field.preset: unknown preset '" + preset +
                                                "' (uniform_E, uniform_B, custom)");
    }
  }

  if (sc.mode == Mode::emt_verify) {
    sc.domain_lo = r.list("numerics", "domain_lo");
    sc.domain_hi = r.list("numerics", "domain_hi");
    std::vector<double> nodes = r.list_or("numerics", "grid_nodes", {32, 64, 128});
    sc.grid_nodes.assign(nodes.begin(), nodes.end());
  }

  if (sc.mode == Mode::qtheory)
    for (int mu = 0; mu < d; ++mu) sc.q_profiles.push_back(load_q_profile(r, "qtheory." + std::to_string(mu), mu));

  // Thresholds.
  sc.thresholds.constraint_drift = r.num_or("checks", "constraint_drift", sc.thresholds.constraint_drift);
  sc.thresholds.shell = r.num_or("checks", "shell", sc.thresholds.shell);
  sc.thresholds.oracle = r.num_or("checks", "oracle", sc.thresholds.oracle);
  sc.thresholds.eom = r.num_or("checks", "eom", sc.thresholds.eom);
  sc.thresholds.qtheory = r.num_or("checks", "qtheory", sc.thresholds.qtheory);
  sc.thresholds.order_target = r.num_or("checks", "order_target", sc.thresholds.order_target);
  sc.thresholds.order_tolerance = r.num_or("checks", "order_tolerance", sc.thresholds.order_tolerance);
  sc.thresholds.cyclic = r.num_or("checks", "cyclic", sc.thresholds.cyclic);

  sc.output_dir = r.str_or("output", "dir", "out");
  sc.prefix = r.str_or("output", "prefix", sc.name);
  r.finish();

  // Shape checks.
  if (needs_particle) {
    if (static_cast<int>(sc.position.size()) != d)
      throw ValidationError("particle.position", "particle.position needs " + std::to_string(d) + " components");
    if (static_cast<int>(sc.velocity.size()) != d - 1)
      throw ValidationError("particle.velocity",
                            "particle.velocity needs " + std::to_string(d - 1) + " spatial components");
    if (!(sc.s_end > sc.s_start)) throw ValidationError("numerics.s_end", "numerics.s_end must exceed s_start");
    if (sc.mode != Mode::qtheory && !(sc.mass > 0.0))
      throw ValidationError("particle.mass", "particle.mass must be positive");
  }
  if (!(sc.integrate.control.step > 0.0)) throw ValidationError("numerics.step", "numerics.step must be positive");
  if (sc.mode == Mode::emt_verify) {
    if (static_cast<int>(sc.domain_lo.size()) != d || static_cast<int>(sc.domain_hi.size()) != d)
      throw ValidationError("numerics.domain_lo", "numerics.domain_lo/domain_hi need one value per dimension");
    if (sc.grid_nodes.size() < 2) throw ValidationError("numerics.grid_nodes", "numerics.grid_nodes needs >= 2 levels");
    for (int n : sc.grid_nodes)
      if (n < 5) throw ValidationError("numerics.grid_nodes", "numerics.grid_nodes entries must be >= 5");
  }
  if (sc.mode == Mode::charged) {
    try {
      check_compatibility(sc.measure, sc.weights);
    } catch (const CompatibilityError& e) {
      throw ValidationError(sc.measure.time_is_trivial() ? "weights" : "measure.0", e.what());
    }
  }
  if (sc.mode == Mode::free_isotropic && !sc.weights.isotropic())
    throw ValidationError("weights.omega", "free_isotropic mode needs weights.omega");
  return sc;
}

Scenario load_scenario_file(const std::string& path) { return load_scenario(ConfigTree::parse_file(path)); }

}  // namespace mscale::cli
