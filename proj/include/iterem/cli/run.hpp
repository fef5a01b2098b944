#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "iterem/cli/config.hpp"

namespace iterem::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 1,
  kExitHypothesis = 2,
  kExitMaxIterations = 3,
  kExitIdentity = 4,
  kExitRuntime = 5,  // numerical breakdown or unwritable output
};

struct RunOptions {
  // Overrides the config's "output"; "iterem-out" when neither is given.
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

// Runs every experiment and writes report.json plus CSV tables, one
// sub-directory per experiment for list configs. Experiments of a list run
// concurrently. Returns the largest exit code; messages go to `log`.
int run_config(const Config& config, const RunOptions& options, std::ostream& log);

// load_config + run_config, mapping config problems to kExitConfig.
int run_file(const std::filesystem::path& file, const RunOptions& options, std::ostream& log);

}  // namespace iterem::cli
