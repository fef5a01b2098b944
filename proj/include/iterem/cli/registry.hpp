#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iterem/envelope.hpp"
#include "iterem/errors.hpp"
#include "iterem/sequence.hpp"

namespace iterem::cli {

using json = nlohmann::json;

// A config problem tied to the field it concerns ("problem.a.q").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Autonomous nonlinearity phi; the equations use f(n, t) = phi(t) and
// f(t, x) = phi(x).
struct Nonlinearity {
  std::string name;
  std::function<double(double)> phi;
  // sup |phi| and a Lipschitz constant on an interval, when they can be
  // stated (poly needs a bounded interval for both).
  std::function<std::optional<double>(const Interval&)> sup_on;
  std::function<std::optional<double>(const Interval&)> lipschitz_on;
};

// A named function of one variable (n or t) with its decay envelope.
struct Family {
  std::string name;
  std::function<double(double)> eval;
  DecayEnvelope env = DecayEnvelope::zero();
  // False for power with beta > 0, which blows up at 0.
  bool finite_at_zero = true;
};

// Both throw ConfigError naming `path` on unknown names or bad parameters.
Nonlinearity make_nonlinearity(const json& desc, const std::string& path);
Family make_family(const json& desc, const std::string& path);

struct RegistryEntry {
  std::string kind;  // "nonlinearity" or "family"
  std::string signature;
  std::string description;
  json example;  // a descriptor accepted by make_nonlinearity / make_family
};

const std::vector<RegistryEntry>& registry();

// Deterministic text listing of the registry.
std::string registry_listing();

}  // namespace iterem::cli
