#include "iterem/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "iterem/kernels.hpp"
#include "iterem/remainder_continuous.hpp"
#include "iterem/remainder_discrete.hpp"

#ifndef ITEREM_VERSION
#define ITEREM_VERSION "unknown"
#endif

namespace iterem::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; unbounded or undefined values are written as strings.
json number_or_tag(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json norm_json(const ExtendedNorm& n) { return n.is_finite() ? json(n.value()) : json("inf"); }

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
}

struct Point {
  double at;
  double value;
};

void write_table(const fs::path& file, const std::vector<Point>& rows) {
  std::string text = "n_or_t,value\n";
  for (const auto& r : rows) text += num(r.at) + "," + num(r.value) + "\n";
  write_text(file, text);
}

std::vector<Point> trace_rows(const std::vector<double>& trace) {
  std::vector<Point> rows;
  for (std::size_t k = 0; k < trace.size(); ++k) rows.push_back({double(k + 1), trace[k]});
  return rows;
}

std::vector<Point> deviation_rows(const std::vector<DeviationPoint>& profile) {
  std::vector<Point> rows;
  for (const auto& p : profile) rows.push_back({p.at, p.value});
  return rows;
}

json metadata(const json& source, double seconds) {
  return {{"config", source},
          {"version", ITEREM_VERSION},
          {"compiler", __VERSION__},
          {"openmp", kernels::parallel_available()},
          {"threads", kernels::max_threads()},
          {"timings", {{"seconds", seconds}}}};
}

json certificate_json(const HypothesisReport& h) {
  const auto& w = h.weighted_sum;
  json checks = json::array();
  for (const auto& c : h.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  const auto* failure = h.first_failure();
  return {{"passed", h.passed()},
          {"forcing_bound", number_or_tag(h.forcing_bound)},
          {"margin", h.margin},
          {"weighted_sum",
           {{"exponent", w.exponent},
            {"partial", w.partial},
            {"tail_bound", number_or_tag(w.tail_bound)},
            {"upper_bound", norm_json(w.upper_bound())},
            {"verdict", w.certified() ? "certified-finite" : "divergent-envelope"}}},
          {"checks", checks},
          {"first_failure", failure ? json(failure->name) : json(nullptr)}};
}

// The weighted sum or integral diverges: the forcing check fails outright.
json divergent_certificate(double margin, const std::string& detail) {
  return {{"passed", false},
          {"forcing_bound", "inf"},
          {"margin", margin},
          {"weighted_sum", {{"upper_bound", "inf"}, {"verdict", "divergent-envelope"}}},
          {"checks", json::array({{{"name", kForcingBoundCheck},
                                   {"passed", false},
                                   {"detail", detail}}})},
          {"first_failure", kForcingBoundCheck}};
}

int exit_for(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return kExitPass;
    case SolveStatus::max_iterations:
      return kExitMaxIterations;
    case SolveStatus::hypothesis_failed:
      return kExitHypothesis;
  }
  return kExitRuntime;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void log_status(std::ostream& log, const std::string& name, SolveStatus status, int iterations,
                double residual, const HypothesisReport& h) {
  log << "[" << name << "] " << to_string(status);
  if (status == SolveStatus::hypothesis_failed) {
    const auto* f = h.first_failure();
    if (f) log << ": " << f->name << ": " << f->detail;
  } else {
    log << " after " << iterations << " iterations, residual_max " << num(residual);
  }
  log << '\n';
}

int run_difference(DifferenceExperiment ex, const RunOptions& opts, const fs::path& dir,
                   std::ostream& log) {
  if (opts.tol) ex.options.tol = *opts.tol;
  if (opts.max_iter) ex.options.max_iter = *opts.max_iter;
  const auto start = std::chrono::steady_clock::now();
  json report = {{"schema", 1}, {"experiment", ex.name}, {"kind", "difference"}};
  int code = kExitRuntime;
  try {
    const SolveResult r = solve(ex.eq, ex.options);
    code = exit_for(r.status);
    report["status"] = to_string(r.status);
    report["certificate"] = certificate_json(r.hypotheses);
    report["solve"] = {{"status", to_string(r.status)},
                       {"iterations", r.iterations},
                       {"residual_max", r.residual_max},
                       {"tol", ex.options.tol},
                       {"max_iter", ex.options.max_iter},
                       {"truncation_bound", r.truncation_bound},
                       {"window", {{"first", r.x.start()}, {"last", r.x.last()}}}};
    write_table(dir / "deviation.csv", deviation_rows(r.deviation_profile));
    write_table(dir / "trace.csv", trace_rows(r.trace));
    log_status(log, ex.name, r.status, r.iterations, r.residual_max, r.hypotheses);
  } catch (const NonSummableError& e) {
    code = kExitHypothesis;
    report["status"] = to_string(SolveStatus::hypothesis_failed);
    report["certificate"] = divergent_certificate(ex.eq.margin, e.what());
    report["solve"] = {{"status", to_string(SolveStatus::hypothesis_failed)}, {"iterations", 0}};
    write_table(dir / "deviation.csv", {});
    write_table(dir / "trace.csv", {});
    log << "[" << ex.name << "] hypothesis-failed: " << kForcingBoundCheck << ": " << e.what()
        << '\n';
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = e.what();
    log << "[" << ex.name << "] error: " << e.what() << '\n';
  }
  report["exit_code"] = code;
  report["tables"] = {{"deviation", "deviation.csv"}, {"trace", "trace.csv"}};
  report["metadata"] = metadata(ex.source, seconds_since(start));
  write_text(dir / "report.json", report.dump(2) + "\n");
  return code;
}

int run_ode(OdeExperiment ex, const RunOptions& opts, const fs::path& dir, std::ostream& log) {
  if (opts.tol) ex.options.tol = *opts.tol;
  if (opts.max_iter) ex.options.max_iter = *opts.max_iter;
  const auto start = std::chrono::steady_clock::now();
  json report = {{"schema", 1}, {"experiment", ex.name}, {"kind", "ode"}};
  int code = kExitRuntime;
  try {
    const OdeSolveResult r = solve_ode(ex.eq, ex.options);
    code = exit_for(r.status);
    report["status"] = to_string(r.status);
    report["certificate"] = certificate_json(r.hypotheses);
    report["certificate"]["slope_bound"] = number_or_tag(r.hypotheses.slope_bound);
    report["solve"] = {{"status", to_string(r.status)},
                       {"iterations", r.iterations},
                       {"residual_max", r.residual.max},
                       {"residual_step", r.residual.step},
                       {"residual_accuracy_order", r.residual.accuracy_order},
                       {"tol", ex.options.tol},
                       {"max_iter", ex.options.max_iter},
                       {"operator_error_bound", r.error_bound},
                       {"slope_modulus", r.slope_modulus},
                       {"grid",
                        {{"points", r.x.size()},
                         {"t0", r.x.t0()},
                         {"t_end", r.x.t_end()},
                         {"first_step", ex.eq.grid.first_step},
                         {"growth", ex.eq.grid.growth}}}};
    write_table(dir / "deviation.csv", deviation_rows(r.deviation_profile));
    write_table(dir / "trace.csv", trace_rows(r.trace));
    log_status(log, ex.name, r.status, r.iterations, r.residual.max, r.hypotheses);
  } catch (const NonSummableError& e) {
    code = kExitHypothesis;
    report["status"] = to_string(SolveStatus::hypothesis_failed);
    report["certificate"] = divergent_certificate(ex.eq.margin, e.what());
    report["solve"] = {{"status", to_string(SolveStatus::hypothesis_failed)}, {"iterations", 0}};
    write_table(dir / "deviation.csv", {});
    write_table(dir / "trace.csv", {});
    log << "[" << ex.name << "] hypothesis-failed: " << kForcingBoundCheck << ": " << e.what()
        << '\n';
  } catch (const Error& e) {
    report["status"] = "error";
    report["error"] = e.what();
    log << "[" << ex.name << "] error: " << e.what() << '\n';
  }
  report["exit_code"] = code;
  report["tables"] = {{"deviation", "deviation.csv"}, {"trace", "trace.csv"}};
  report["metadata"] = metadata(ex.source, seconds_since(start));
  write_text(dir / "report.json", report.dump(2) + "\n");
  return code;
}

struct IdentityRow {
  std::string check;
  std::string input;
  int m;
  std::optional<int> k;
  double max_deviation = 0.0;
  double tolerance;
  std::optional<double> error_bound;
  std::string error;

  std::string status() const {
    if (!error.empty()) return "error";
    return max_deviation <= tolerance ? "pass" : "fail";
  }
};

int run_identity_suite(const IdentitySuite& s, const fs::path& dir, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<IdentityRow> rows;

  // Runs one measurement, keeping the worst deviation; numerical failures
  // are recorded on the row rather than aborting the suite.
  auto measure = [](IdentityRow& row, auto&& fn) {
    try {
      row.max_deviation = std::max(row.max_deviation, fn());
    } catch (const Error& e) {
      if (row.error.empty()) row.error = e.what();
    }
  };

  for (const auto& in : s.sequences) {
    const SequenceWindow x = SequenceWindow::generate(
        1, s.window, [&](Index n) { return in.family.eval(static_cast<double>(n)); });
    for (int m : s.sequence_orders) {
      const RemainderInput input(x, in.family.env, m);
      for (int k = 1; k <= m; ++k) {
        IdentityRow row{k < m ? "difference_ladder" : "difference_inversion", in.label, m, k,
                        0.0, s.difference_tol, std::nullopt, ""};
        measure(row, [&] {
          const auto d = check_difference_identity(input, k, s.first, s.last);
          row.error_bound = d.error_bound;
          return d.max_deviation;
        });
        rows.push_back(row);
      }
    }
  }

  for (const auto& in : s.functions) {
    const ContinuousSource src{in.family.eval, in.family.env, s.t0, s.t_end};
    for (int m : s.function_orders) {
      for (int k = 1; k <= m; ++k) {
        IdentityRow row{k < m ? "derivative_ladder" : "derivative_inversion", in.label, m, k,
                        0.0, s.derivative_tol, std::nullopt, ""};
        for (double t : s.points) {
          measure(row, [&] {
            return derivative_identity_check(src, m, k, t, s.step, s.quadrature).deviation;
          });
        }
        rows.push_back(row);
      }
    }
  }

  for (const auto& in : s.swap_functions) {
    for (int m : s.swap_orders) {
      IdentityRow row{"order_swap", in.label, m, std::nullopt, 0.0, s.swap_tol,
                      std::nullopt, ""};
      for (const auto& [a, b] : s.intervals) {
        measure(row, [&] { return fubini_check(in.family.eval, a, b, m, s.quadrature).deviation; });
      }
      rows.push_back(row);
    }
  }

  int code = kExitPass;
  std::size_t failed = 0;
  std::string csv = "check,input,m,k,max_deviation,tolerance,status\n";
  json table = json::array();
  for (const auto& r : rows) {
    const std::string status = r.status();
    if (status == "error") code = std::max<int>(code, kExitRuntime);
    if (status == "fail") code = std::max<int>(code, kExitIdentity);
    if (status != "pass") ++failed;
    csv += r.check + ",\"" + r.input + "\"," + std::to_string(r.m) + "," +
           (r.k ? std::to_string(*r.k) : "") + "," + num(r.max_deviation) + "," +
           num(r.tolerance) + "," + status + "\n";
    json j = {{"check", r.check},     {"input", r.input},         {"m", r.m},
              {"k", r.k ? json(*r.k) : json(nullptr)},           {"max_deviation", r.max_deviation},
              {"tolerance", r.tolerance}, {"status", status}};
    if (r.error_bound) j["error_bound"] = *r.error_bound;
    if (!r.error.empty()) j["error"] = r.error;
    table.push_back(j);
  }
  write_text(dir / "identities.csv", csv);

  json report = {{"schema", 1},
                 {"experiment", s.name},
                 {"kind", "identity-suite"},
                 {"status", code == kExitPass ? "pass" : "fail"},
                 {"exit_code", code},
                 {"checks_run", rows.size()},
                 {"checks_failed", failed},
                 {"identities", table},
                 {"tables", {{"identities", "identities.csv"}}},
                 {"metadata", metadata(s.source, seconds_since(start))}};
  write_text(dir / "report.json", report.dump(2) + "\n");
  log << "[" << s.name << "] " << (code == kExitPass ? "pass" : "fail") << ": "
      << rows.size() - failed << "/" << rows.size() << " identity checks within tolerance\n";
  return code;
}

int run_one(const Experiment& e, const RunOptions& opts, const fs::path& dir, std::ostream& log) {
  try {
    fs::create_directories(dir);
    return std::visit(
        [&](const auto& ex) -> int {
          using T = std::decay_t<decltype(ex)>;
          if constexpr (std::is_same_v<T, DifferenceExperiment>) {
            return run_difference(ex, opts, dir, log);
          } else if constexpr (std::is_same_v<T, OdeExperiment>) {
            return run_ode(ex, opts, dir, log);
          } else {
            return run_identity_suite(ex, dir, log);
          }
        },
        e);
  } catch (const std::invalid_argument& ex) {
    log << "[" << experiment_name(e) << "] invalid input: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    log << "[" << experiment_name(e) << "] failed: " << ex.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int run_config(const Config& config, const RunOptions& options, std::ostream& log) {
  if (options.tol && !(*options.tol > 0.0)) {
    log << "config error: --tol must be > 0\n";
    return kExitConfig;
  }
  if (options.max_iter && *options.max_iter < 1) {
    log << "config error: --max-iter must be >= 1\n";
    return kExitConfig;
  }
  const fs::path base = options.out_dir ? *options.out_dir
                                        : fs::path(config.output.value_or("iterem-out"));

  std::vector<std::ostringstream> logs(config.experiments.size());
  std::vector<std::future<int>> jobs;
  for (std::size_t i = 0; i < config.experiments.size(); ++i) {
    const Experiment& e = config.experiments[i];
    const fs::path dir = config.is_list ? base / experiment_name(e) : base;
    jobs.push_back(std::async(std::launch::async, [&, i, dir] {
      return run_one(e, options, dir, logs[i]);
    }));
  }
  int code = kExitPass;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    code = std::max(code, jobs[i].get());
    log << logs[i].str();
  }
  return code;
}

int run_file(const fs::path& file, const RunOptions& options, std::ostream& log) {
  Config config;
  try {
    config = load_config(file);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_config(config, options, log);
}

}  // namespace iterem::cli
