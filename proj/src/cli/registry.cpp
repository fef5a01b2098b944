#include "iterem/cli/registry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fields.hpp"

namespace iterem::cli {

namespace {

using detail::Fields;

// Accepts "sin" or {"name": "sin", ...params}.
std::string entry_name(const json& desc, const std::string& path) {
  if (desc.is_string()) return desc.get<std::string>();
  if (!desc.is_object()) throw ConfigError(path, "expected a name or an object with \"name\"");
  auto it = desc.find("name");
  if (it == desc.end() || !it->is_string()) {
    throw ConfigError(detail::join(path, "name"), "missing required field");
  }
  return it->get<std::string>();
}

json as_object(const json& desc) {
  return desc.is_string() ? json{{"name", desc}} : desc;
}

std::optional<double> bounded_radius(const Interval& u) {
  if (!u.is_bounded() || u.is_empty()) return std::nullopt;
  return std::max(std::abs(*u.lo()), std::abs(*u.hi()));
}

}  // namespace

Nonlinearity make_nonlinearity(const json& desc, const std::string& path) {
  const std::string name = entry_name(desc, path);
  const json obj = as_object(desc);
  Fields fields(obj, path);
  fields.child("name");
  Nonlinearity out;
  out.name = name;

  if (name == "constant") {
    const double c = fields.number("c");
    out.phi = [c](double) { return c; };
    out.sup_on = [c](const Interval&) { return std::optional<double>(std::abs(c)); };
    out.lipschitz_on = [](const Interval&) { return std::optional<double>(0.0); };
  } else if (name == "sin") {
    out.phi = [](double t) { return std::sin(t); };
    out.sup_on = [](const Interval&) { return std::optional<double>(1.0); };
    out.lipschitz_on = [](const Interval&) { return std::optional<double>(1.0); };
  } else if (name == "atan") {
    out.phi = [](double t) { return std::atan(t); };
    out.sup_on = [](const Interval& u) {
      const double half_pi = std::numbers::pi / 2;
      const double lo = u.lo() ? std::abs(std::atan(*u.lo())) : half_pi;
      const double hi = u.hi() ? std::abs(std::atan(*u.hi())) : half_pi;
      return std::optional<double>(std::max(lo, hi));
    };
    out.lipschitz_on = [](const Interval&) { return std::optional<double>(1.0); };
  } else if (name == "logistic") {
    const double k = fields.number("k");
    out.phi = [k](double t) { return 1.0 / (1.0 + std::exp(-k * t)); };
    out.sup_on = [](const Interval&) { return std::optional<double>(1.0); };
    out.lipschitz_on = [k](const Interval&) { return std::optional<double>(std::abs(k) / 4); };
  } else if (name == "poly") {
    const std::vector<double> c = detail::number_list(fields.required("coeffs"),
                                                      fields.at("coeffs"));
    if (c.empty()) throw ConfigError(fields.at("coeffs"), "needs at least one coefficient");
    out.phi = [c](double t) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
      return v;
    };
    out.sup_on = [c](const Interval& u) -> std::optional<double> {
      const auto r = bounded_radius(u);
      if (!r) return std::nullopt;
      double s = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) s += std::abs(c[i]) * std::pow(*r, i);
      return s;
    };
    out.lipschitz_on = [c](const Interval& u) -> std::optional<double> {
      const auto r = bounded_radius(u);
      if (!r) return std::nullopt;
      double s = 0.0;
      for (std::size_t i = 1; i < c.size(); ++i) s += i * std::abs(c[i]) * std::pow(*r, i - 1);
      return s;
    };
  } else {
    throw ConfigError(detail::join(path, "name"), "unknown nonlinearity \"" + name + "\"");
  }
  fields.finish();
  return out;
}

Family make_family(const json& desc, const std::string& path) {
  const std::string name = entry_name(desc, path);
  const json obj = as_object(desc);
  Fields fields(obj, path);
  fields.child("name");
  Family out;
  out.name = name;

  if (name == "geometric") {
    const double c = fields.number("C");
    const double q = fields.number("q");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError(fields.at("q"), "must lie in (0, 1)");
    out.eval = [c, q](double s) { return c * std::pow(q, s); };
    out.env = DecayEnvelope::geometric(std::abs(c), q);
  } else if (name == "power") {
    const double c = fields.number("C");
    const double beta = fields.number("beta");
    out.eval = [c, beta](double s) { return c * std::pow(s, -beta); };
    out.env = DecayEnvelope::power(std::abs(c), beta);
    out.finite_at_zero = beta <= 0.0;
  } else if (name == "exp") {
    const double c = fields.number("C");
    const double lambda = fields.number("lambda");
    if (!(lambda > 0.0)) throw ConfigError(fields.at("lambda"), "must be > 0");
    out.eval = [c, lambda](double s) { return c * std::exp(-lambda * s); };
    out.env = DecayEnvelope::geometric(std::abs(c), std::exp(-lambda));
  } else if (name == "zero") {
    out.eval = [](double) { return 0.0; };
  } else if (name == "constant") {
    const double c = fields.number("c");
    out.eval = [c](double) { return c; };
    out.env = c == 0.0 ? DecayEnvelope::zero() : DecayEnvelope::power(std::abs(c), 0.0);
  } else {
    throw ConfigError(detail::join(path, "name"), "unknown family \"" + name + "\"");
  }
  fields.finish();
  return out;
}

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"nonlinearity", "constant(c)", "f = c; M = |c|, L = 0",
       json{{"name", "constant"}, {"c", 1.0}}},
      {"nonlinearity", "sin", "f = sin(x); M = 1, L = 1", json{{"name", "sin"}}},
      {"nonlinearity", "atan", "f = atan(x); M = sup |atan| over U (pi/2 if unbounded), L = 1",
       json{{"name", "atan"}}},
      {"nonlinearity", "logistic(k)", "f = 1 / (1 + exp(-k x)); M = 1, L = |k| / 4",
       json{{"name", "logistic"}, {"k", 1.0}}},
      {"nonlinearity", "poly(coeffs)",
       "f = sum coeffs[i] x^i; M and L from |x| <= R on a bounded U",
       json{{"name", "poly"}, {"coeffs", {0.0, 0.5}}}},
      {"family", "geometric(C,q)", "C q^s, 0 < q < 1; envelope |C| q^s",
       json{{"name", "geometric"}, {"C", 1.0}, {"q", 0.5}}},
      {"family", "power(C,beta)", "C s^(-beta); envelope |C| s^(-beta)",
       json{{"name", "power"}, {"C", 1.0}, {"beta", 4.0}}},
      {"family", "exp(C,lambda)", "C exp(-lambda s), lambda > 0; envelope |C| exp(-lambda s)",
       json{{"name", "exp"}, {"C", 1.0}, {"lambda", 1.0}}},
      {"family", "zero", "0; envelope 0", json{{"name", "zero"}}},
      {"family", "constant(c)", "c; envelope |c| (not summable unless c = 0)",
       json{{"name", "constant"}, {"c", 1.0}}},
  };
  return entries;
}

std::string registry_listing() {
  std::ostringstream out;
  std::string kind;
  for (const auto& e : registry()) {
    if (e.kind != kind) {
      if (!kind.empty()) out << '\n';
      kind = e.kind;
      out << (kind == "nonlinearity" ? "nonlinearities (f):" : "families (a, b, y):") << '\n';
    }
    out << "  " << e.signature;
    for (std::size_t pad = e.signature.size(); pad < 18; ++pad) out << ' ';
    out << e.description << '\n';
    out << "    example: " << e.example.dump() << '\n';
  }
  return out.str();
}

}  // namespace iterem::cli
