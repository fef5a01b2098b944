#include "iterem/solver_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "iterem/errors.hpp"
#include "iterem/interpolation.hpp"
#include "iterem/kernels.hpp"

namespace iterem {

namespace {

constexpr std::size_t kMaxGridPoints = 2'000'000;
constexpr std::size_t kMaxSampledPoints = 256;
constexpr int kBandSamples = 9;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sign_of_order(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// h^-m sum_i (-1)^i C(m, i) g(t + (m/2 - i) h)
double central_difference(const std::function<double(double)>& g, int m, double t, double h) {
  double acc = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= m; ++i) {
    acc += ((i % 2 == 0) ? 1.0 : -1.0) * binom * g(t + (0.5 * m - i) * h);
    binom = binom * (m - i) / (i + 1);
  }
  return acc / std::pow(h, m);
}

std::vector<std::size_t> sample_positions(std::size_t count) {
  const std::size_t stride = std::max<std::size_t>(1, count / kMaxSampledPoints);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; i += stride) out.push_back(i);
  if (out.back() != count - 1) out.push_back(count - 1);
  return out;
}

}  // namespace

std::vector<double> make_grid(double t0, const GridSpec& spec) {
  if (!(spec.first_step > 0.0)) throw std::invalid_argument("make_grid: first_step must be > 0");
  if (!(spec.growth >= 0.0)) throw std::invalid_argument("make_grid: growth must be >= 0");
  if (!(spec.t_end > t0)) throw std::invalid_argument("make_grid: t_end must exceed t0");
  std::vector<double> grid{t0};
  double step = spec.first_step;
  double t = t0;
  while (t + step < spec.t_end) {
    t += step;
    grid.push_back(t);
    step *= 1.0 + spec.growth;
    if (grid.size() > kMaxGridPoints) {
      throw std::invalid_argument("make_grid: more than " + std::to_string(kMaxGridPoints) +
                                  " points; enlarge first_step or growth");
    }
  }
  // Fold a sliver final panel into its neighbour.
  if (grid.size() > 1 && spec.t_end - grid.back() < 0.25 * step) grid.pop_back();
  grid.push_back(spec.t_end);
  return grid;
}

void validate(const OdeProblem& eq) {
  if (eq.order < 1) throw std::invalid_argument("ode: order m must be >= 1");
  if (!(eq.t0 >= 0.0)) throw std::invalid_argument("ode: need t0 >= 0");
  if (!(eq.bound >= 1.0)) throw std::invalid_argument("ode: need M >= 1");
  if (!(eq.margin > 0.0)) throw std::invalid_argument("ode: need mu > 0");
  if (!(eq.alpha <= 0.0)) throw std::invalid_argument("ode: need alpha <= 0");
  if (eq.lipschitz && !(*eq.lipschitz >= 0.0)) {
    throw std::invalid_argument("ode: Lipschitz constant must be >= 0");
  }
  if (!eq.a || !eq.b || !eq.y || !eq.f) throw std::invalid_argument("ode: a, b, y, f must be set");
  if (!(eq.grid.t_end > eq.t0)) throw std::invalid_argument("ode: grid end must exceed t0");
}

OdeHypothesisReport check_hypotheses_ode(const OdeProblem& eq) {
  validate(eq);
  OdeHypothesisReport report;
  report.margin = eq.margin;
  const auto grid = make_grid(eq.t0, eq.grid);
  const double t_end = eq.grid.t_end;

  const ContinuousSource a_src{eq.a, eq.a_env, eq.t0, t_end};
  // The certificate is compared against mu with relative slack
  // kBoundComparisonSlack, so resolve the quadrature below that if possible.
  QuadratureConfig fine = eq.quadrature;
  fine.abs_tol = std::min(eq.quadrature.abs_tol, 0.1 * kBoundComparisonSlack * eq.margin);
  try {
    report.weighted_sum = integrability_certificate(a_src, eq.order, eq.alpha, fine);
  } catch (const PrecisionError&) {
    report.weighted_sum = integrability_certificate(a_src, eq.order, eq.alpha, eq.quadrature);
  }
  if (!report.weighted_sum.certified()) {
    throw NonSummableError("integral of s^" + num(report.weighted_sum.exponent) +
                           " |a(s)| is not certified: envelope " + eq.a_env.describe() +
                           " diverges");
  }
  report.forcing_bound = eq.bound * report.weighted_sum.upper_bound().value();
  const bool forcing_ok = report.forcing_bound <= eq.margin * (1.0 + kBoundComparisonSlack);
  report.checks.push_back({kForcingBoundCheck, forcing_ok,
                           "certified bound on M * integral s^(m-1-alpha)|a(s)| ds is " +
                               num(report.forcing_bound) +
                               (forcing_ok ? ", within mu = " : ", above mu = ") +
                               num(eq.margin)});

  const Interval interior = framed_interior(eq.domain, eq.margin);
  std::optional<double> outside;
  for (double t : grid) {
    if (!interior.contains(eq.y(t))) {
      outside = t;
      break;
    }
  }
  report.checks.push_back(
      {kInteriorCheck, !outside,
       outside ? "y(" + num(*outside) + ") = " + num(eq.y(*outside)) +
                     " lies outside the framed interior of U"
               : "y inside the framed interior of U at every grid point"});

  // y^(m) = b by central differences at sampled grid points.
  const double h_rel = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (eq.order + 2));
  double worst_dev = 0.0;
  double worst_tol = 0.0;
  bool approx_ok = true;
  for (std::size_t i : sample_positions(grid.size())) {
    const double t = grid[i];
    const double h = h_rel * std::max(1.0, std::abs(t));
    if (t - 0.5 * eq.order * h < eq.t0) continue;
    const double dev = std::abs(central_difference(eq.y, eq.order, t, h) - eq.b(t));
    const double tol = 1e-4 * std::max({1.0, std::abs(eq.b(t)), std::abs(eq.y(t))});
    if (dev > worst_dev) {
      worst_dev = dev;
      worst_tol = tol;
    }
    approx_ok = approx_ok && dev <= tol;
  }
  report.checks.push_back({kApproximantCheck, approx_ok,
                           "max sampled |y^(m) - b| = " + num(worst_dev) +
                               (approx_ok ? "" : " (tolerance " + num(worst_tol) + ")")});

  double worst = 0.0;
  std::optional<std::pair<double, double>> violation;
  for (std::size_t i : sample_positions(grid.size())) {
    const double t = grid[i];
    const double yt = eq.y(t);
    const Interval band = eq.domain.clamp(yt - eq.margin, yt + eq.margin);
    if (band.is_empty()) continue;
    for (int s = 0; s < kBandSamples; ++s) {
      const double v = *band.lo() + (*band.hi() - *band.lo()) * s / (kBandSamples - 1);
      const double fv = std::abs(eq.f(t, v));
      worst = std::max(worst, fv);
      if (!(fv <= eq.bound * (1.0 + kBoundComparisonSlack)) && !violation) violation = {{t, v}};
    }
  }
  report.checks.push_back(
      {kBoundSampleCheck, !violation,
       violation ? "|f(" + num(violation->first) + ", " + num(violation->second) +
                       ")| exceeds M = " + num(eq.bound)
                 : "sampled max |f| = " + num(worst) + " <= M = " + num(eq.bound)});

  if (eq.order == 1) {
    double sup_a = 0.0;
    for (double t : grid) sup_a = std::max(sup_a, std::abs(eq.a(t)));
    const ExtendedNorm beyond = eq.a_env.sup_from(t_end);
    sup_a = std::max(sup_a, beyond.is_finite() ? beyond.value()
                                               : std::numeric_limits<double>::max());
    report.slope_bound = eq.bound * sup_a;
  } else {
    const SummabilityReport lower =
        integrability_certificate(a_src, eq.order - 1, 0.0, eq.quadrature);
    report.slope_bound = eq.bound * lower.upper_bound().value();
  }
  return report;
}

OdeOperatorImage apply_A_ode(const OdeProblem& eq, const GridFunction& x, Execution exec) {
  const auto& grid = x.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!eq.domain.contains(x.values()[i])) {
      throw DomainViolationError("apply_A_ode: x(" + num(grid[i]) + ") = " +
                                 num(x.values()[i]) + " left U");
    }
  }
  const MonotoneCubic interp(grid, x.values());
  const kernels::PanelRule rule = kernels::gauss_kronrod_panels(grid);
  std::vector<double> forced(rule.nodes.size());
  const auto count = static_cast<std::ptrdiff_t>(forced.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < count; ++q) {
      const double s = rule.nodes[static_cast<std::size_t>(q)];
      forced[static_cast<std::size_t>(q)] = eq.a(s) * eq.f(s, interp(s));
    }
  } else {
    for (std::ptrdiff_t q = 0; q < count; ++q) {
      const double s = rule.nodes[static_cast<std::size_t>(q)];
      forced[static_cast<std::size_t>(q)] = eq.a(s) * eq.f(s, interp(s));
    }
  }

  std::vector<double> r(grid.size()), err(grid.size());
  kernels::grid_remainder(grid, rule, forced, eq.order, r, err, exec);
  const double quad_err = *std::max_element(err.begin(), err.end());
  const double tail = eq.a_env.scaled(eq.bound).tail_integral(eq.order - 1, x.t_end());

  const double sign = sign_of_order(eq.order);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = eq.y(grid[i]) + sign * r[i];

  if (quad_err > eq.quadrature.abs_tol) {
    throw PrecisionError("apply_A_ode: panel quadrature estimate " + num(quad_err) +
                             " exceeds abs_tol " + num(eq.quadrature.abs_tol) +
                             "; refine the grid",
                         out.front(), quad_err + tail);
  }
  return {GridFunction(grid, std::move(out)), quad_err + tail};
}

ResidualReport residual_ode(const OdeProblem& eq, const std::function<double(double)>& x,
                            const std::vector<double>& samples, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("residual_ode: step must be > 0");
  double worst = 0.0;
  for (double t : samples) {
    const double lhs = central_difference(x, eq.order, t, step);
    worst = std::max(worst, std::abs(lhs - eq.a(t) * eq.f(t, x(t)) - eq.b(t)));
  }
  return {worst, step, 2};
}

ResidualReport residual_ode(const OdeProblem& eq, const GridFunction& x,
                            const std::vector<double>& samples, double step) {
  const double half = 0.5 * eq.order * step;
  for (double t : samples) {
    if (t - half < x.t0() || t + half > x.t_end()) {
      throw InsufficientDataError("residual_ode: stencil around t = " + num(t) +
                                  " leaves the grid");
    }
  }
  auto interp = std::make_shared<MonotoneCubic>(x.grid(), x.values());
  return residual_ode(eq, [interp](double t) { return (*interp)(t); }, samples, step);
}

std::vector<double> residual_samples(const GridFunction& x, int order, double step) {
  // The end panels use one-sided interpolant slopes, so stencils stay clear
  // of them.
  const double half = 0.5 * order * step;
  const auto& g = x.grid();
  std::vector<double> out;
  if (g.size() < 4) return out;
  const double lo = g[1];
  const double hi = g[g.size() - 2];
  for (double t : g) {
    if (t - half >= lo && t + half <= hi) out.push_back(t);
  }
  return out;
}

double equicontinuity_modulus(const std::vector<GridFunction>& family) {
  double worst = 0.0;
  if (family.empty()) return worst;
  const auto& grid = family.front().grid();
  for (const auto& g : family) {
    if (g.grid() != grid) throw ShapeError("equicontinuity_modulus: members on different grids");
    const auto& v = g.values();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      worst = std::max(worst, std::abs(v[i + 1] - v[i]) / (grid[i + 1] - grid[i]));
    }
  }
  return worst;
}

std::vector<DeviationPoint> asymptotic_deviation_ode(const GridFunction& x,
                                                     const std::function<double(double)>& y,
                                                     double alpha,
                                                     const std::vector<double>& checkpoints) {
  const MonotoneCubic interp(x.grid(), x.values());
  std::vector<DeviationPoint> out;
  out.reserve(checkpoints.size());
  for (double t : checkpoints) {
    if (t < x.t0() || t > x.t_end()) {
      throw IndexError("asymptotic_deviation_ode: checkpoint " + num(t) + " off the grid");
    }
    out.push_back({t, std::abs(interp(t) - y(t)) * std::pow(t, -alpha)});
  }
  return out;
}

OdeSolveResult solve_ode(const OdeProblem& eq, const OdeSolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_ode: tol must be > 0");
  if (opts.max_iter < 1) throw std::invalid_argument("solve_ode: max_iter must be >= 1");

  const auto grid = make_grid(eq.t0, eq.grid);
  OdeSolveResult result{.x = GridFunction::sample(grid, eq.y),
                        .hypotheses = check_hypotheses_ode(eq)};
  const GridFunction y_grid = result.x;

  if (!result.hypotheses.passed()) {
    result.status = SolveStatus::hypothesis_failed;
  } else {
    result.status = SolveStatus::max_iterations;
    std::vector<GridFunction> images;
    for (int k = 1; k <= opts.max_iter; ++k) {
      OdeOperatorImage next = apply_A_ode(eq, result.x, opts.exec);
      const double gap = sup_metric(next.x, result.x).value();
      result.trace.push_back(gap);
      result.error_bound = next.error_bound;
      images.push_back(next.x);
      result.x = std::move(next.x);
      result.iterations = k;
      if (gap < opts.tol) {
        result.status = SolveStatus::converged;
        break;
      }
    }
    result.slope_modulus = equicontinuity_modulus(images);
  }

  result.residual = residual_ode(eq, result.x, residual_samples(result.x, eq.order,
                                                                opts.residual_step),
                                 opts.residual_step);
  result.deviation_profile.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.deviation_profile.push_back(
        {grid[i], std::abs(result.x.values()[i] - y_grid.values()[i]) *
                      std::pow(grid[i], -eq.alpha)});
  }
  return result;
}

}  // namespace iterem
