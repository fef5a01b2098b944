#include "iterem/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fields.hpp"

namespace iterem::cli {

namespace {

using detail::Fields;
using detail::join;

struct CommonProblem {
  int order = 1;
  Family a, b, y;
  Nonlinearity f;
  double bound = 1.0;
  std::optional<double> lipschitz;
  Interval domain = Interval::real_line();
  double margin = 1.0;
  double alpha = 0.0;
};

Family family_or_zero(Fields& fields, const std::string& key) {
  const json* j = fields.child(key);
  return j ? make_family(*j, fields.at(key)) : make_family(json("zero"), fields.at(key));
}

Interval parse_domain(const json& j, const std::string& path) {
  Fields fields(j, path);
  const auto lo = fields.opt_number("lo");
  const auto hi = fields.opt_number("hi");
  fields.finish();
  if (lo && hi && !(*lo < *hi)) throw ConfigError(path, "need lo < hi");
  return Interval(lo, hi);
}

// Reads the fields shared by both equation kinds; the caller reads the
// starting point ("start" or "t0") before calling finish().
CommonProblem parse_common(Fields& fields) {
  CommonProblem p;
  const long long order = fields.integer("order", 1);
  if (order < 1 || order > 12) throw ConfigError(fields.at("order"), "must lie in [1, 12]");
  p.order = static_cast<int>(order);
  p.a = make_family(fields.required("a"), fields.at("a"));
  p.b = family_or_zero(fields, "b");
  p.y = family_or_zero(fields, "y");
  p.f = make_nonlinearity(fields.required("f"), fields.at("f"));
  if (const json* d = fields.child("domain")) p.domain = parse_domain(*d, fields.at("domain"));

  p.margin = fields.number("margin", 1.0);
  if (!(p.margin > 0.0)) throw ConfigError(fields.at("margin"), "must be > 0");
  p.alpha = fields.number("alpha", 0.0);
  if (!(p.alpha <= 0.0)) throw ConfigError(fields.at("alpha"), "must be <= 0");

  if (const auto m = fields.opt_number("bound")) {
    if (!(*m >= 1.0)) throw ConfigError(fields.at("bound"), "must be >= 1");
    p.bound = *m;
  } else {
    const auto sup = p.f.sup_on(p.domain);
    if (!sup) {
      throw ConfigError(fields.at("bound"),
                        "required: " + p.f.name + " has no stated bound on an unbounded domain");
    }
    p.bound = std::max(1.0, *sup);
  }
  if (const auto l = fields.opt_number("lipschitz")) {
    if (!(*l >= 0.0)) throw ConfigError(fields.at("lipschitz"), "must be >= 0");
    p.lipschitz = *l;
  } else {
    p.lipschitz = p.f.lipschitz_on(p.domain);
  }
  return p;
}

void require_finite_from(const CommonProblem& p, double first, const std::string& path) {
  const std::pair<const char*, const Family*> families[] = {{"a", &p.a}, {"b", &p.b}, {"y", &p.y}};
  for (const auto& [key, fam] : families) {
    if (first <= 0.0 && !fam->finite_at_zero) {
      throw ConfigError(join(path, key), fam->name + " is unbounded at 0; start after 0");
    }
  }
}

double positive(Fields& fields, const std::string& key, double fallback) {
  const double v = fields.number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(fields.at(key), "must be > 0");
  return v;
}

int positive_int(Fields& fields, const std::string& key, long long fallback) {
  const long long v = fields.integer(key, fallback);
  if (v < 1 || v > 1'000'000'000) throw ConfigError(fields.at(key), "must be a positive integer");
  return static_cast<int>(v);
}

QuadratureConfig parse_quadrature(Fields& fields, QuadratureConfig q) {
  q.abs_tol = positive(fields, "abs_tol", q.abs_tol);
  q.max_subdivisions = positive_int(fields, "max_subdivisions", q.max_subdivisions);
  return q;
}

template <typename Fn>
void with_library_checks(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

DifferenceExperiment parse_difference(Fields& top) {
  DifferenceExperiment ex;
  Fields problem(top.required("problem"), top.at("problem"));
  const CommonProblem p = parse_common(problem);
  const long long start = problem.integer("start", 1);
  if (start < 0 || start > 1'000'000'000) {
    throw ConfigError(problem.at("start"), "must be a non-negative integer");
  }
  problem.finish();
  require_finite_from(p, static_cast<double>(start), problem.path());

  Index window = 200;
  if (const json* c = top.child("controls")) {
    Fields controls(*c, top.at("controls"));
    ex.options.tol = positive(controls, "tol", ex.options.tol);
    ex.options.max_iter = positive_int(controls, "max_iter", ex.options.max_iter);
    window = positive_int(controls, "window", window);
    controls.finish();
    if (window <= p.order) {
      throw ConfigError(controls.at("window"), "must exceed the order");
    }
  }

  const Index last = start + window - 1;
  auto sample = [&](const Family& fam) {
    return SequenceWindow::generate(start, last,
                                    [&](Index n) { return fam.eval(static_cast<double>(n)); });
  };
  auto& eq = ex.eq;
  eq.order = p.order;
  eq.a = sample(p.a);
  eq.a_env = p.a.env;
  eq.b = sample(p.b);
  eq.y = sample(p.y);
  eq.f = [phi = p.f.phi](Index, double t) { return phi(t); };
  eq.bound = p.bound;
  eq.lipschitz = p.lipschitz;
  eq.domain = p.domain;
  eq.margin = p.margin;
  eq.alpha = p.alpha;
  with_library_checks(problem.path(), [&] { validate(eq); });
  return ex;
}

OdeExperiment parse_ode(Fields& top) {
  OdeExperiment ex;
  Fields problem(top.required("problem"), top.at("problem"));
  const CommonProblem p = parse_common(problem);
  const double t0 = problem.number("t0", 0.0);
  if (!(t0 >= 0.0)) throw ConfigError(problem.at("t0"), "must be >= 0");
  problem.finish();
  require_finite_from(p, t0, problem.path());

  auto& eq = ex.eq;
  if (const json* c = top.child("controls")) {
    Fields controls(*c, top.at("controls"));
    ex.options.tol = positive(controls, "tol", ex.options.tol);
    ex.options.max_iter = positive_int(controls, "max_iter", ex.options.max_iter);
    ex.options.residual_step = positive(controls, "residual_step", ex.options.residual_step);
    if (const json* g = controls.child("grid")) {
      Fields grid(*g, controls.at("grid"));
      eq.grid.first_step = positive(grid, "first_step", eq.grid.first_step);
      eq.grid.growth = grid.number("growth", eq.grid.growth);
      if (!(eq.grid.growth >= 0.0)) throw ConfigError(grid.at("growth"), "must be >= 0");
      eq.grid.t_end = grid.number("t_end", eq.grid.t_end);
      if (!(eq.grid.t_end > t0)) throw ConfigError(grid.at("t_end"), "must exceed t0");
      grid.finish();
    }
    if (const json* q = controls.child("quadrature")) {
      Fields quad(*q, controls.at("quadrature"));
      eq.quadrature = parse_quadrature(quad, eq.quadrature);
      quad.finish();
    }
    controls.finish();
  }

  eq.order = p.order;
  eq.t0 = t0;
  eq.a = p.a.eval;
  eq.a_env = p.a.env;
  eq.b = p.b.eval;
  eq.y = p.y.eval;
  eq.f = [phi = p.f.phi](double, double x) { return phi(x); };
  eq.bound = p.bound;
  eq.lipschitz = p.lipschitz;
  eq.domain = p.domain;
  eq.margin = p.margin;
  eq.alpha = p.alpha;
  with_library_checks(problem.path(), [&] {
    validate(eq);
    make_grid(eq.t0, eq.grid);
  });
  return ex;
}

std::string family_label(const json& desc) {
  if (desc.is_string()) return desc.get<std::string>();
  std::string out = desc.at("name").get<std::string>();
  std::string params;
  for (auto it = desc.begin(); it != desc.end(); ++it) {
    if (it.key() == "name") continue;
    params += (params.empty() ? "" : ",") + it.key() + "=" + it.value().dump();
  }
  return params.empty() ? out : out + "(" + params + ")";
}

std::vector<IdentityInput> parse_inputs(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of families");
  std::vector<IdentityInput> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back({"", make_family(j[i], join(path, i))});
    out.back().label = family_label(j[i]);
  }
  return out;
}

std::vector<int> nonempty_orders(Fields& fields, int lo, int hi, std::vector<int> fallback) {
  const json* j = fields.child("orders");
  if (!j) return fallback;
  auto out = detail::order_list(*j, fields.at("orders"), lo, hi);
  if (out.empty()) throw ConfigError(fields.at("orders"), "must not be empty");
  return out;
}

IdentitySuite parse_identity_suite(Fields& top) {
  IdentitySuite s;
  bool any = false;

  if (const json* d = top.child("difference")) {
    any = true;
    Fields f(*d, top.at("difference"));
    s.sequences = parse_inputs(f.required("sequences"), f.at("sequences"));
    s.sequence_orders = nonempty_orders(f, 1, 12, {1, 2, 3, 4});
    s.window = positive_int(f, "window", s.window);
    s.first = f.integer("first", s.first);
    s.last = f.integer("last", s.last);
    s.difference_tol = positive(f, "tol", s.difference_tol);
    f.finish();
    const int top_order = *std::max_element(s.sequence_orders.begin(), s.sequence_orders.end());
    if (s.first < 1) throw ConfigError(f.at("first"), "must be >= 1");
    if (s.last < s.first) throw ConfigError(f.at("last"), "must be >= first");
    if (s.last + top_order > s.window) {
      throw ConfigError(f.at("window"), "must be at least last + largest order");
    }
    for (std::size_t i = 0; i < s.sequences.size(); ++i) {
      const Family& fam = s.sequences[i].family;
      for (int m : s.sequence_orders) {
        if (!fam.env.summable_with_weight(m - 1)) {
          throw ConfigError(join(f.at("sequences"), i),
                            fam.name + " is not summable against n^" + std::to_string(m - 1));
        }
      }
    }
  }

  if (const json* d = top.child("derivative")) {
    any = true;
    Fields f(*d, top.at("derivative"));
    s.functions = parse_inputs(f.required("functions"), f.at("functions"));
    s.function_orders = nonempty_orders(f, 1, 6, {1, 2, 3});
    s.points = detail::number_list(f.required("points"), f.at("points"));
    if (s.points.empty()) throw ConfigError(f.at("points"), "must not be empty");
    s.step = positive(f, "step", s.step);
    s.t0 = f.number("t0", s.t0);
    if (!(s.t0 >= 0.0)) throw ConfigError(f.at("t0"), "must be >= 0");
    s.t_end = f.number("t_end", s.t_end);
    if (!(s.t_end > s.t0)) throw ConfigError(f.at("t_end"), "must exceed t0");
    s.derivative_tol = positive(f, "tol", s.derivative_tol);
    f.finish();
    const int top_order = *std::max_element(s.function_orders.begin(), s.function_orders.end());
    const double half_width = 0.5 * top_order * s.step;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (s.points[i] - half_width < s.t0 || s.points[i] + half_width >= s.t_end) {
        throw ConfigError(join(f.at("points"), i),
                          "difference stencil must stay inside [t0, t_end)");
      }
    }
    for (std::size_t i = 0; i < s.functions.size(); ++i) {
      const Family& fam = s.functions[i].family;
      if (s.t0 <= 0.0 && !fam.finite_at_zero) {
        throw ConfigError(join(f.at("functions"), i), fam.name + " is unbounded at 0");
      }
      for (int m : s.function_orders) {
        if (!fam.env.summable_with_weight(m - 1)) {
          throw ConfigError(join(f.at("functions"), i),
                            fam.name + " is not integrable against s^" + std::to_string(m - 1));
        }
      }
    }
  }

  if (const json* d = top.child("order_swap")) {
    any = true;
    Fields f(*d, top.at("order_swap"));
    s.swap_functions = parse_inputs(f.required("functions"), f.at("functions"));
    s.swap_orders = nonempty_orders(f, 0, 12, {0, 1, 2});
    const json& iv = f.required("intervals");
    if (!iv.is_array() || iv.empty()) {
      throw ConfigError(f.at("intervals"), "expected a non-empty array of [a, b] pairs");
    }
    for (std::size_t i = 0; i < iv.size(); ++i) {
      const auto pair = detail::number_list(iv[i], join(f.at("intervals"), i));
      if (pair.size() != 2 || !(pair[0] < pair[1])) {
        throw ConfigError(join(f.at("intervals"), i), "expected [a, b] with a < b");
      }
      s.intervals.emplace_back(pair[0], pair[1]);
    }
    s.swap_tol = positive(f, "tol", s.swap_tol);
    f.finish();
    for (std::size_t i = 0; i < s.swap_functions.size(); ++i) {
      for (const auto& [a, b] : s.intervals) {
        if (a <= 0.0 && !s.swap_functions[i].family.finite_at_zero) {
          throw ConfigError(join(f.at("functions"), i),
                            s.swap_functions[i].family.name + " is unbounded at 0");
        }
      }
    }
  }

  if (const json* q = top.child("quadrature")) {
    Fields quad(*q, top.at("quadrature"));
    s.quadrature = parse_quadrature(quad, s.quadrature);
    quad.finish();
  }
  if (!any) {
    throw ConfigError(top.path(), "identity suite needs difference, derivative or order_swap");
  }
  return s;
}

bool safe_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

Experiment parse_experiment(const json& j, const std::string& path, bool top_level,
                            bool name_required) {
  Fields fields(j, path);
  if (top_level) {
    fields.child("schema");
    fields.child("output");
  }
  const std::string kind = fields.string("kind");
  std::string name = kind;
  if (auto n = fields.opt_string("name")) {
    name = *n;
  } else if (name_required) {
    throw ConfigError(fields.at("name"), "missing required field");
  }
  if (!safe_name(name)) {
    throw ConfigError(fields.at("name"), "use letters, digits, '_', '-' and '.' only");
  }

  json source = j;
  source.erase("output");
  auto finish = [&](auto ex) -> Experiment {
    fields.finish();
    ex.name = name;
    ex.source = source;
    return ex;
  };
  if (kind == "difference") return finish(parse_difference(fields));
  if (kind == "ode") return finish(parse_ode(fields));
  if (kind == "identity-suite") return finish(parse_identity_suite(fields));
  throw ConfigError(fields.at("kind"),
                    "unknown kind \"" + kind + "\" (difference, ode or identity-suite)");
}

}  // namespace

const std::string& experiment_name(const Experiment& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, e);
}

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");
  const auto schema = doc.find("schema");
  if (schema == doc.end()) throw ConfigError("schema", "missing required field");
  if (!schema->is_number_integer() || schema->get<long long>() != 1) {
    throw ConfigError("schema", "unsupported schema version (expected 1)");
  }

  Config config;
  if (const auto out = doc.find("output"); out != doc.end()) {
    if (!out->is_string()) throw ConfigError("output", "expected a string");
    config.output = out->get<std::string>();
  }

  const auto list = doc.find("experiments");
  if (list == doc.end()) {
    config.experiments.push_back(parse_experiment(doc, "", true, false));
    return config;
  }

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "schema" && it.key() != "output" && it.key() != "experiments") {
      throw ConfigError(it.key(), "unknown field (a list config takes schema, output, "
                                  "experiments)");
    }
  }
  if (!list->is_array() || list->empty()) {
    throw ConfigError("experiments", "expected a non-empty array");
  }
  config.is_list = true;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = join("experiments", i);
    config.experiments.push_back(parse_experiment((*list)[i], path, false, true));
    if (!names.insert(experiment_name(config.experiments.back())).second) {
      throw ConfigError(join(path, "name"), "duplicate experiment name");
    }
  }
  return config;
}

Config load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("", file.string() + ": line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": malformed JSON (" + e.what() + ")");
  }
  return parse_config(doc);
}

}  // namespace iterem::cli
