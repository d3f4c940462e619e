// Runs the full acceptance suite and prints one line per criterion.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "mscale/cli/verify.hpp"

int main(int argc, char** argv) {
  mscale::cli::VerifyOptions opt;
  opt.scenario_dir = MSCALE_SCENARIO_DIR;
  if (argc > 1) opt.filter = argv[1];
  const auto results = mscale::cli::run_verification(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << mscale::cli::format_criterion_line(r) << "\n";
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  if (const char* path = std::getenv("MSCALE_ACCEPTANCE_JSON")) {
    std::ofstream(path) << mscale::cli::verification_json(results).dump(2) << "\n";
  }
  return failed == 0 ? 0 : 1;
}
