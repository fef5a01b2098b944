#include <iostream>

#include <CLI11.hpp>

#include "iterem/cli/registry.hpp"
#include "iterem/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"iterem: iterated remainder operators and asymptotic solution solvers"};
  app.require_subcommand(1);

  iterem::cli::RunOptions options;
  std::string config_path;
  std::string out_dir;
  double tol = 0.0;
  int max_iter = 0;

  auto* run = app.add_subcommand("run", "Run the experiments of a JSON config");
  run->add_option("config", config_path, "Config file (JSON, \"schema\": 1)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* out_opt = run->add_option("--out-dir", out_dir, "Directory for reports");
  auto* tol_opt = run->add_option("--tol", tol, "Override the iteration tolerance");
  auto* iter_opt = run->add_option("--max-iter", max_iter, "Override the iteration limit");

  auto* list = app.add_subcommand("list-registry", "List the named nonlinearities and families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : iterem::cli::kExitConfig;
  }

  if (list->parsed()) {
    std::cout << iterem::cli::registry_listing();
    return 0;
  }
  if (*out_opt) options.out_dir = out_dir;
  if (*tol_opt) options.tol = tol;
  if (*iter_opt) options.max_iter = max_iter;
  return iterem::cli::run_file(config_path, options, std::cout);
}
