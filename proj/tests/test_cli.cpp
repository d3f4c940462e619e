#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mscale/cli/output.hpp"
#include "mscale/cli/runner.hpp"
#include "mscale/cli/scenario.hpp"
#include "mscale/errors.hpp"

using namespace mscale;
using namespace mscale::cli;

namespace {

const std::string kData = MSCALE_TEST_DATA_DIR;
const std::string kScenarios = MSCALE_SCENARIO_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("mscale_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config tree keeps dotted section names") {
  const auto t = ConfigTree::parse_string("[measure.1]\nkind = power_law\nalpha = 0.5\n[particle]\nmass = 2\n");
  CHECK(t.has_section("measure.1"));
  CHECK(t.get("measure.1", "alpha").value() == "0.5");
  CHECK_FALSE(t.get("measure", "1.alpha").has_value());

  ConfigTree u = t;
  u.set("measure.1.alpha", "0.25");
  CHECK(u.get("measure.1", "alpha").value() == "0.25");
  u.set("numerics.step", "0.01");
  CHECK(u.get("numerics", "step").value() == "0.01");
}

TEST_CASE("malformed input is a parse error") {
  CHECK_THROWS_AS(ConfigTree::parse_string("[scenario\nname = x\n"), ParseError);
  CHECK_THROWS_AS(ConfigTree::parse_string("mass = 1\n[particle]\n"), ParseError);
  CHECK_THROWS_AS(load_scenario(ConfigTree::parse_string(
                      "[scenario]\nname=a\nmode=free_isotropic\n[particle]\nmass=abc\nposition=0,0\nvelocity=0\n"
                      "[numerics]\ns_end=1\n")),
                  ParseError);
}

TEST_CASE("every missing key is named") {
  try {
    load_scenario_file(kData + "/missing_keys.ini");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("particle.mass") != std::string::npos);
    CHECK(msg.find("particle.velocity") != std::string::npos);
    CHECK(msg.find("numerics.s_end") != std::string::npos);
  }
}

TEST_CASE("incompatible charged weights are rejected with the field") {
  try {
    load_scenario_file(kData + "/charged_incompatible.ini");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "measure.0");
    CHECK(std::string(e.what()).find("spatial") != std::string::npos);
  }
}

TEST_CASE("run_command exit codes") {
  std::ostringstream out, err;
  CHECK(run_command(kData + "/malformed.ini", out, err) == exit_parse);
  CHECK(run_command(kData + "/missing_keys.ini", out, err) == exit_validation);
  CHECK(run_command(kData + "/charged_incompatible.ini", out, err) == exit_validation);
  std::ostringstream err4;
  CHECK(run_command(kData + "/drift_abort.ini", out, err4) == exit_runtime);
  CHECK(err4.str().find("drift") != std::string::npos);
  CHECK(run_command(kData + "/does_not_exist.ini", out, err) == exit_parse);
}

TEST_CASE("trivial-weight run is a straight line and passes") {
  Scenario sc = load_scenario_file(kScenarios + "/free_flat.ini");
  sc.output_dir = scratch("flat").string();
  const RunResult r = run_scenario(sc);
  CHECK(r.passed());
  REQUIRE(!r.artifacts.empty());
  std::istringstream csv(slurp(r.artifacts.front()));
  std::string header, line;
  std::getline(csv, header);
  CHECK(header.rfind("s,x0,x1,x2,x3,u0,u1,u2,u3,", 0) == 0);
  const double u[3] = {0.3, -0.1, 0.2};
  const double gamma = std::sqrt(1 + 0.09 + 0.01 + 0.04);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream ls(line);
    std::string cell;
    double v[5];  // s, x0..x3
    for (double& x : v) {
      std::getline(ls, cell, ',');
      x = std::stod(cell);
    }
    CHECK(v[1] == doctest::Approx(gamma * v[0]).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(u[0] * v[0]).epsilon(1e-12));
    CHECK(v[3] == doctest::Approx(u[1] * v[0]).epsilon(1e-12));
    CHECK(v[4] == doctest::Approx(u[2] * v[0]).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows > 10);
}

TEST_CASE("artifacts are byte-identical across runs") {
  for (const char* name : {"free_power", "charged_uniform_b", "qtheory", "emt_binomial"}) {
    CAPTURE(name);
    Scenario sc = load_scenario_file(kScenarios + "/" + name + ".ini");
    sc.output_dir = scratch(std::string("det_a_") + name).string();
    const RunResult a = run_scenario(sc);
    sc.output_dir = scratch(std::string("det_b_") + name).string();
    const RunResult b = run_scenario(sc);
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
      std::string x = slurp(a.artifacts[k]), y = slurp(b.artifacts[k]);
      if (a.artifacts[k].ends_with(".json")) {
        // artifact paths differ between the two output dirs
        auto jx = nlohmann::json::parse(x), jy = nlohmann::json::parse(y);
        jx.erase("artifacts");
        jy.erase("artifacts");
        x = jx.dump();
        y = jy.dump();
      }
      CHECK(!x.empty());
      CHECK(x == y);
    }
  }
}

TEST_CASE("report json carries the schema version and checks") {
  Scenario sc = load_scenario_file(kScenarios + "/charged_uniform_e.ini");
  const RunResult r = run_scenario(sc, RunOptions{false});
  CHECK(r.artifacts.empty());
  const auto j = r.to_json();
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("mode") == "charged");
  CHECK(j.at("checks").size() == r.checks.size());
}

TEST_CASE("sweep validation") {
  const auto base = ConfigTree::parse_file(kScenarios + "/free_power.ini");
  CHECK_THROWS_AS(sweep(base, "numerics.step", {}), ValidationError);
  CHECK_THROWS_AS(sweep(base, "numerics.step", {"0.1", "fast"}), ValidationError);
  const auto rows = sweep(base, "numerics.step", {"0.1", "0.05"});
  REQUIRE(rows.size() == 2);
  // the coarse step misses the oracle bound; the sweep still reports it
  CHECK(rows[0].status == exit_check_failed);
  CHECK(rows[1].ratio == doctest::Approx(16.0).epsilon(0.1));
  CHECK(rows[1].order == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_double(x)) == x);
}
