#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iterem/cli/registry.hpp"
#include "iterem/solver_continuous.hpp"
#include "iterem/solver_discrete.hpp"

namespace iterem::cli {

using json = nlohmann::json;

struct DifferenceExperiment {
  std::string name;
  json source;  // the experiment object as written
  DifferenceEquation eq;
  SolveOptions options;
};

struct OdeExperiment {
  std::string name;
  json source;
  OdeProblem eq;
  OdeSolveOptions options;
};

struct IdentityInput {
  std::string label;  // e.g. "geometric(C=1,q=0.5)"
  Family family;
};

struct IdentitySuite {
  std::string name;
  json source;

  // Discrete ladder and inversion on x_1..x_window, checked on [first, last].
  std::vector<IdentityInput> sequences;
  std::vector<int> sequence_orders;
  Index window = 200;
  Index first = 1;
  Index last = 50;
  double difference_tol = 1e-9;

  // Continuous ladder and inversion at each point.
  std::vector<IdentityInput> functions;
  std::vector<int> function_orders;
  std::vector<double> points;
  double step = 1e-3;
  double t0 = 0.0;
  double t_end = 60.0;
  double derivative_tol = 1e-5;

  // Order of integration swapped, on each interval.
  std::vector<IdentityInput> swap_functions;
  std::vector<std::pair<double, double>> intervals;
  std::vector<int> swap_orders;
  double swap_tol = 1e-8;

  QuadratureConfig quadrature{1e-12, 4000};
};

using Experiment = std::variant<DifferenceExperiment, OdeExperiment, IdentitySuite>;

const std::string& experiment_name(const Experiment& e);

struct Config {
  std::vector<Experiment> experiments;
  bool is_list = false;  // one sub-directory per experiment
  std::optional<std::string> output;
};

// Throws ConfigError.
Config parse_config(const json& doc);
// Reports malformed JSON with its line and column.
Config load_config(const std::filesystem::path& file);

}  // namespace iterem::cli
