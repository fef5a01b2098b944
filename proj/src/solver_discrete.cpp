#include "iterem/solver_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "iterem/errors.hpp"

namespace iterem {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sign_of_order(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Samples per index across the band [y_n - mu, y_n + mu].
constexpr int kBandSamples = 9;
constexpr std::size_t kMaxSampledIndices = 512;

}  // namespace

void validate(const DifferenceEquation& eq) {
  if (eq.order < 1) throw std::invalid_argument("difference equation: order m must be >= 1");
  if (!(eq.bound >= 1.0)) throw std::invalid_argument("difference equation: need M >= 1");
  if (!(eq.margin > 0.0)) throw std::invalid_argument("difference equation: need mu > 0");
  if (!(eq.alpha <= 0.0)) throw std::invalid_argument("difference equation: need alpha <= 0");
  if (eq.lipschitz && !(*eq.lipschitz >= 0.0)) {
    throw std::invalid_argument("difference equation: Lipschitz constant must be >= 0");
  }
  if (!eq.f) throw std::invalid_argument("difference equation: f is not set");
  if (eq.b.start() != eq.a.start() || eq.y.start() != eq.a.start() ||
      eq.b.size() != eq.a.size() || eq.y.size() != eq.a.size()) {
    throw ShapeError("difference equation: a, b and y must share start index and length");
  }
  if (eq.a.size() <= static_cast<std::size_t>(eq.order)) {
    throw InsufficientDataError("difference equation: window shorter than the order");
  }
}

bool HypothesisReport::passed() const { return first_failure() == nullptr; }

const HypothesisCheck* HypothesisReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

HypothesisReport check_hypotheses(const DifferenceEquation& eq) {
  validate(eq);
  HypothesisReport report;
  report.margin = eq.margin;

  report.weighted_sum = summability_certificate(eq.a_env, eq.a, eq.order, eq.alpha);
  if (!report.weighted_sum.certified()) {
    throw NonSummableError("sum n^" + num(report.weighted_sum.exponent) + " |a_n| is not " +
                           "certified: envelope " + eq.a_env.describe() + " diverges");
  }
  report.forcing_bound = eq.bound * report.weighted_sum.upper_bound().value();
  const bool forcing_ok = report.forcing_bound <= eq.margin * (1.0 + kBoundComparisonSlack);
  report.checks.push_back({kForcingBoundCheck, forcing_ok,
                           "certified bound on M * sum n^(m-1-alpha)|a_n| is " +
                               num(report.forcing_bound) +
                               (forcing_ok ? ", within mu = " : ", above mu = ") +
                               num(eq.margin)});

  const Interval interior = framed_interior(eq.domain, eq.margin);
  std::optional<Index> outside;
  for (Index n = eq.y.start(); n <= eq.y.last() && !outside; ++n) {
    if (!interior.contains(eq.y[n])) outside = n;
  }
  report.checks.push_back(
      {kInteriorCheck, !outside,
       outside ? "y_" + std::to_string(*outside) + " = " + num(eq.y[*outside]) +
                     " lies outside the framed interior of U"
               : "all stored y_n inside the framed interior of U"});

  const SequenceWindow dy = forward_difference(eq.y, eq.order);
  double dev = 0.0;
  double scale = 1.0;
  for (Index n = dy.start(); n <= dy.last(); ++n) {
    dev = std::max(dev, std::abs(dy[n] - eq.b[n]));
    scale = std::max({scale, std::abs(eq.y[n]), std::abs(eq.b[n])});
  }
  const double dy_tol = 1e-9 * scale;
  report.checks.push_back({kApproximantCheck, dev <= dy_tol,
                           "max |Delta^m y - b| = " + num(dev) + " (tolerance " +
                               num(dy_tol) + ")"});

  const std::size_t count = eq.a.size();
  const std::size_t stride = std::max<std::size_t>(1, count / kMaxSampledIndices);
  double worst = 0.0;
  std::optional<std::pair<Index, double>> violation;
  for (std::size_t i = 0; i < count; i += stride) {
    const Index n = eq.a.start() + static_cast<Index>(i);
    const Interval band = eq.domain.clamp(eq.y[n] - eq.margin, eq.y[n] + eq.margin);
    if (band.is_empty()) continue;
    const double lo = *band.lo();
    const double hi = *band.hi();
    for (int s = 0; s < kBandSamples; ++s) {
      const double t = lo + (hi - lo) * s / (kBandSamples - 1);
      const double v = std::abs(eq.f(n, t));
      worst = std::max(worst, v);
      if (!(v <= eq.bound * (1.0 + kBoundComparisonSlack)) && !violation) violation = {{n, t}};
    }
  }
  report.checks.push_back(
      {kBoundSampleCheck, !violation,
       violation ? "|f(" + std::to_string(violation->first) + ", " + num(violation->second) +
                       ")| exceeds M = " + num(eq.bound)
                 : "sampled max |f| = " + num(worst) + " <= M = " + num(eq.bound)});
  return report;
}

SequenceWindow apply_A(const DifferenceEquation& eq, const SequenceWindow& x, Execution exec) {
  if (x.start() != eq.start() || x.size() != eq.a.size()) {
    throw ShapeError("apply_A: iterate does not match the equation window");
  }
  for (Index n = x.start(); n <= x.last(); ++n) {
    if (!eq.domain.contains(x[n])) {
      throw DomainViolationError("apply_A: x_" + std::to_string(n) + " = " + num(x[n]) +
                                 " left U");
    }
  }
  const auto count = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> forced(x.size());
  const Index p = x.start();
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Index n = p + i;
      forced[static_cast<std::size_t>(i)] = eq.a[n] * eq.f(n, x[n]);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const Index n = p + i;
      forced[static_cast<std::size_t>(i)] = eq.a[n] * eq.f(n, x[n]);
    }
  }

  const RemainderInput in(SequenceWindow(p, std::move(forced)), eq.a_env.scaled(eq.bound),
                          eq.order);
  const SequenceWindow r = rm_window(in, p, x.last(), exec);
  const double sign = sign_of_order(eq.order);
  std::vector<double> out(x.size());
  for (Index n = p; n <= x.last(); ++n) {
    out[static_cast<std::size_t>(n - p)] = eq.y[n] + sign * r[n];
  }
  return SequenceWindow(p, std::move(out));
}

double operator_truncation_bound(const DifferenceEquation& eq) {
  return eq.a_env.scaled(eq.bound).tail_sum(eq.order - 1, eq.last() + 1);
}

double residual(const DifferenceEquation& eq, const SequenceWindow& x, Index first, Index last) {
  if (first > last || first < x.start()) throw IndexError("residual: bad index range");
  if (last + eq.order > x.last()) {
    throw InsufficientDataError("residual: range end " + std::to_string(last) +
                                " leaves no room for " + std::to_string(eq.order) +
                                " differences");
  }
  const SequenceWindow d = forward_difference(x.slice(first, last + eq.order), eq.order);
  double worst = 0.0;
  for (Index n = first; n <= last; ++n) {
    worst = std::max(worst, std::abs(d[n] - eq.a.at(n) * eq.f(n, x[n]) - eq.b.at(n)));
  }
  return worst;
}

double residual(const DifferenceEquation& eq, const SequenceWindow& x) {
  return residual(eq, x, x.start(), x.last() - eq.order);
}

std::vector<DeviationPoint> asymptotic_deviation(const SequenceWindow& x, const SequenceWindow& y,
                                                 double alpha,
                                                 const std::vector<Index>& checkpoints) {
  std::vector<DeviationPoint> out;
  out.reserve(checkpoints.size());
  for (Index n : checkpoints) {
    const double at = static_cast<double>(n);
    out.push_back({at, std::abs(x.at(n) - y.at(n)) * std::pow(at, -alpha)});
  }
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max-iterations";
    case SolveStatus::hypothesis_failed:
      return "hypothesis-failed";
  }
  return "?";
}

SolveResult solve(const DifferenceEquation& eq, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
  if (opts.max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");

  SolveResult result{.x = eq.y, .hypotheses = check_hypotheses(eq)};
  result.truncation_bound = operator_truncation_bound(eq);

  std::vector<Index> all(eq.y.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = eq.start() + static_cast<Index>(i);

  if (!result.hypotheses.passed()) {
    result.status = SolveStatus::hypothesis_failed;
    result.residual_max = residual(eq, result.x);
    result.deviation_profile = asymptotic_deviation(result.x, eq.y, eq.alpha, all);
    return result;
  }

  result.status = SolveStatus::max_iterations;
  for (int k = 1; k <= opts.max_iter; ++k) {
    SequenceWindow next = apply_A(eq, result.x, opts.exec);
    const double gap = sup_metric(next, result.x).value();
    result.trace.push_back(gap);
    result.x = std::move(next);
    result.iterations = k;
    if (gap < opts.tol) {
      result.status = SolveStatus::converged;
      break;
    }
  }
  result.residual_max = residual(eq, result.x);
  result.deviation_profile = asymptotic_deviation(result.x, eq.y, eq.alpha, all);
  return result;
}

}  // namespace iterem
