#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mscale/cli/output.hpp"
#include "mscale/cli/runner.hpp"
#include "mscale/cli/verify.hpp"
#include "mscale/kernels/kernels.hpp"

#ifndef MSCALE_SCENARIO_DIR
#define MSCALE_SCENARIO_DIR "scenarios"
#endif

using namespace mscale::cli;

int main(int argc, char** argv) {
  CLI::App app{"multiscale particle and field scenario runner"};
  app.require_subcommand(1);

  std::string run_file;
  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("file", run_file, "scenario .ini file")->required();

  VerifyOptions vopt;
  vopt.scenario_dir = MSCALE_SCENARIO_DIR;
  std::string json_path;
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--filter", vopt.filter, "only criteria whose name contains this");
  verify->add_option("--scenarios", vopt.scenario_dir, "directory of shipped scenarios");
  verify->add_option("--json", json_path, "summary path ('-' for stdout; default <output dir>/verify_summary.json)");

  std::string sweep_file, param;
  std::vector<std::string> values;
  auto* sw = app.add_subcommand("sweep", "run a scenario over values of one numeric key");
  sw->add_option("file", sweep_file, "scenario .ini file")->required();
  sw->add_option("--param", param, "section.key to vary")->required();
  sw->add_option("--values", values, "comma-separated values")->delimiter(',')->expected(0, -1);

  std::string isa;
  app.add_option("--isa", isa, "force grid kernel variant (scalar, avx2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_parse;
  }
  if (isa == "scalar") mscale::kernels::force_isa(mscale::kernels::Isa::scalar);
  if (isa == "avx2") mscale::kernels::force_isa(mscale::kernels::Isa::avx2);

  if (*run) return run_command(run_file, std::cout, std::cerr);
  std::erase(values, std::string{});
  if (*sw) return sweep_command(sweep_file, param, values, std::cout, std::cerr);

  try {
    const auto results = run_verification(vopt);
    bool all = true;
    for (const auto& r : results) {
      std::cout << format_criterion_line(r) << '\n';
      all = all && r.passed;
    }
    const std::string summary = verification_json(results).dump(2) + "\n";
    if (json_path == "-") {
      std::cout << summary;
    } else {
      if (json_path.empty()) {
        const char* env = std::getenv("MSCALE_OUTPUT_DIR");
        json_path = (std::filesystem::path(env && *env ? env : "out") / "verify_summary.json").string();
      }
      write_file(json_path, summary);
      std::cout << "summary: " << json_path << '\n';
    }
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << " (" << results.size() << " run, kernels "
              << mscale::kernels::isa_name(mscale::kernels::active_isa()) << ")\n";
    return all ? exit_ok : exit_check_failed;
  } catch (...) {
    return exit_code_for_current_exception(std::cerr);
  }
}
