#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iterem/cli/registry.hpp"

namespace iterem::cli::detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string join(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

// Reads the members of one JSON object, tracking which ones were consumed so
// that leftovers can be rejected as unknown fields.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* child(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* j = child(key);
    if (!j) throw ConfigError(at(key), "missing required field");
    return *j;
  }

  std::optional<double> opt_number(const std::string& key) {
    const json* j = child(key);
    if (!j) return std::nullopt;
    return as_number(*j, at(key));
  }

  double number(const std::string& key) { return as_number(required(key), at(key)); }

  double number(const std::string& key, double fallback) {
    return opt_number(key).value_or(fallback);
  }

  std::optional<long long> opt_integer(const std::string& key) {
    const json* j = child(key);
    if (!j) return std::nullopt;
    return as_integer(*j, at(key));
  }

  long long integer(const std::string& key, long long fallback) {
    return opt_integer(key).value_or(fallback);
  }

  std::optional<std::string> opt_string(const std::string& key) {
    const json* j = child(key);
    if (!j) return std::nullopt;
    if (!j->is_string()) throw ConfigError(at(key), "expected a string");
    return j->get<std::string>();
  }

  std::string string(const std::string& key) {
    auto s = opt_string(key);
    if (!s) throw ConfigError(at(key), "missing required field");
    return *s;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

  static double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
  }

  static long long as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Fields::as_number(j[i], join(path, i)));
  return out;
}

inline std::vector<int> order_list(const json& j, const std::string& path, int lo, int hi) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const long long v = Fields::as_integer(j[i], join(path, i));
    if (v < lo || v > hi) {
      throw ConfigError(join(path, i),
                        "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace iterem::cli::detail
