#include "iterem/remainder_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "iterem/errors.hpp"
#include "iterem/interpolation.hpp"

namespace iterem {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// (u)^(m-1) / (m-1)!
double kernel(double u, int order) { return std::pow(u, order - 1) / factorial(order - 1); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values,
                           std::optional<DecayEnvelope> env)
    : grid_(std::move(grid)), values_(std::move(values)), env_(env) {
  if (grid_.size() < 2) throw InsufficientDataError("GridFunction: need at least two points");
  if (values_.size() != grid_.size()) throw ShapeError("GridFunction: one value per grid point");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("GridFunction: non-finite entry at position " +
                                  std::to_string(i));
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw std::invalid_argument("GridFunction: grid must be strictly increasing");
    }
  }
}

GridFunction GridFunction::sample(const std::vector<double>& grid,
                                  const std::function<double(double)>& f,
                                  std::optional<DecayEnvelope> env) {
  std::vector<double> v;
  v.reserve(grid.size());
  for (double t : grid) v.push_back(f(t));
  return GridFunction(grid, std::move(v), env);
}

ContinuousSource GridFunction::as_source() const {
  if (!env_) {
    throw InsufficientDataError("GridFunction::as_source: no envelope past the grid end");
  }
  auto interp = std::make_shared<MonotoneCubic>(grid_, values_);
  return ContinuousSource{[interp](double s) { return (*interp)(s); }, *env_, t0(), t_end()};
}

ExtendedNorm sup_metric(const GridFunction& f, const GridFunction& g) {
  if (f.grid() != g.grid()) throw ShapeError("sup_metric: grid functions live on different grids");
  return sup_metric(std::span<const double>(f.values()), std::span<const double>(g.values()));
}

RemainderValue rm_cont(const ContinuousSource& src, int order, double t,
                       const QuadratureConfig& q) {
  if (order < 1) throw std::invalid_argument("rm_cont: order must be >= 1");
  if (t < src.t0) {
    throw IndexError("rm_cont: t = " + num(t) + " precedes t0 = " + num(src.t0));
  }
  if (!src.env.summable_with_weight(order - 1)) {
    throw NonSummableError("rm_cont: integral of s^" + std::to_string(order - 1) + " * " +
                           src.env.describe() + " diverges");
  }
  const double tail = src.env.tail_integral(order - 1, std::max(t, src.t_end));
  if (t >= src.t_end) return {0.0, tail};

  const auto integrand = [&](double u) { return kernel(u, order) * src.f(t + u); };
  const QuadratureResult r = integrate(integrand, 0.0, src.t_end - t, q);
  if (!r.converged) {
    throw PrecisionError("rm_cont: quadrature missed abs_tol " + num(q.abs_tol) + " at t = " +
                             num(t) + " (estimate " + num(r.error_estimate) + ")",
                         r.value, r.error_estimate + tail);
  }
  return {r.value, r.error_estimate + tail};
}

OrderSwapCheck fubini_check(const std::function<double(double)>& f, double a, double b, int m,
                            const QuadratureConfig& q) {
  if (m < 0) throw std::invalid_argument("fubini_check: m must be >= 0");
  if (!(b > a)) throw std::invalid_argument("fubini_check: need b > a");

  QuadratureConfig inner_cfg = q;
  inner_cfg.abs_tol = q.abs_tol / (4.0 * (b - a));
  QuadratureConfig outer_cfg = q;
  outer_cfg.abs_tol = 0.5 * q.abs_tol;

  const double inv_m = 1.0 / factorial(m);
  bool inner_ok = true;
  double inner_worst = 0.0;
  const auto inner = [&](double t) {
    const QuadratureResult r = integrate(
        [&](double s) { return std::pow(s - t, m) * inv_m * f(s); }, t, b, inner_cfg);
    inner_ok = inner_ok && r.converged;
    inner_worst = std::max(inner_worst, r.error_estimate);
    return r.value;
  };
  const QuadratureResult lhs = integrate(inner, a, b, outer_cfg);

  const double inv_m1 = 1.0 / factorial(m + 1);
  const QuadratureResult rhs =
      integrate([&](double s) { return std::pow(s - a, m + 1) * inv_m1 * f(s); }, a, b, q);

  const double dev = std::abs(lhs.value - rhs.value);
  if (!inner_ok || !lhs.converged || !rhs.converged) {
    throw PrecisionError("fubini_check: quadrature missed tolerance (inner worst " +
                             num(inner_worst) + ")",
                         dev, lhs.error_estimate + rhs.error_estimate + inner_worst * (b - a));
  }
  return {lhs.value, rhs.value, dev};
}

double default_difference_step(double t) { return 1e-3 * std::max(1.0, std::abs(t)); }

DerivativeCheck derivative_identity_check(const ContinuousSource& src, int order, int k,
                                          double t, std::optional<double> step,
                                          const QuadratureConfig& q) {
  if (order < 1) throw std::invalid_argument("derivative_identity_check: order must be >= 1");
  if (k < 0 || k > order) {
    throw std::invalid_argument("derivative_identity_check: k must lie in [0, m]");
  }
  const double h = step.value_or(default_difference_step(t));
  if (!(h > 0.0)) throw std::invalid_argument("derivative_identity_check: step must be > 0");

  if (k == 0) {
    const double v = rm_cont(src, order, t, q).value;
    return {v, v, 0.0, h};
  }

  const double half_width = 0.5 * k * h;
  if (t - half_width < src.t0) {
    throw InsufficientDataError("derivative_identity_check: stencil at t = " + num(t) +
                                " reaches below t0");
  }
  const double reach = src.t_end - (t + half_width);
  if (!(reach > 0.0)) {
    throw InsufficientDataError("derivative_identity_check: stencil passes t_end");
  }

  std::vector<double> shifts(static_cast<std::size_t>(k) + 1);
  std::vector<double> weights(shifts.size());
  double binom = 1.0;
  const double scale = std::pow(h, -k);
  for (int i = 0; i <= k; ++i) {
    shifts[static_cast<std::size_t>(i)] = (0.5 * k - i) * h;
    weights[static_cast<std::size_t>(i)] = ((i % 2 == 0) ? 1.0 : -1.0) * binom * scale;
    binom = binom * (k - i) / (i + 1);
  }

  // Roundoff in the stencil sum is about eps * sum|w_i| * |f|; no quadrature
  // can resolve below that, so the tolerance is floored there.
  const QuadratureResult magnitude = integrate(
      [&](double u) { return kernel(u, order) * std::abs(src.f(t + u)); }, 0.0, reach,
      QuadratureConfig{1e-6, q.max_subdivisions});
  const double noise = 256.0 * std::numeric_limits<double>::epsilon() * std::pow(2.0 / h, k) *
                       std::abs(magnitude.value);
  QuadratureConfig cfg = q;
  cfg.abs_tol = std::max(q.abs_tol, noise);

  const auto integrand = [&](double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < shifts.size(); ++i) acc += weights[i] * src.f(t + shifts[i] + u);
    return kernel(u, order) * acc;
  };
  const QuadratureResult diff = integrate(integrand, 0.0, reach, cfg);
  if (!diff.converged) {
    throw PrecisionError("derivative_identity_check: stencil quadrature missed tolerance",
                         diff.value, diff.error_estimate);
  }

  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double lower = k == order ? src.f(t) : rm_cont(src, order - k, t, q).value;
  const double identity = sign * lower;
  return {diff.value, identity, std::abs(diff.value - identity), h};
}

SummabilityReport integrability_certificate(const DecayEnvelope& env, int order, double alpha,
                                            double t0) {
  if (order < 1) throw std::invalid_argument("integrability_certificate: order must be >= 1");
  if (alpha > 0.0) throw std::invalid_argument("integrability_certificate: alpha must be <= 0");
  SummabilityReport r;
  r.exponent = order - 1 - alpha;
  if (!env.summable_with_weight(r.exponent)) {
    r.verdict = SummabilityReport::Verdict::divergent_envelope;
    return r;
  }
  r.tail_bound = env.tail_integral(r.exponent, t0);
  r.verdict = SummabilityReport::Verdict::certified_finite;
  return r;
}

SummabilityReport integrability_certificate(const ContinuousSource& src, int order,
                                            double alpha, const QuadratureConfig& q) {
  if (order < 1) throw std::invalid_argument("integrability_certificate: order must be >= 1");
  if (alpha > 0.0) throw std::invalid_argument("integrability_certificate: alpha must be <= 0");
  SummabilityReport r;
  r.exponent = order - 1 - alpha;
  const double w = r.exponent;
  const QuadratureResult part = integrate(
      [&](double s) { return std::pow(s, w) * std::abs(src.f(s)); }, src.t0, src.t_end, q);
  if (!part.converged) {
    throw PrecisionError("integrability_certificate: quadrature missed tolerance", part.value,
                         part.error_estimate);
  }
  r.partial = part.value;
  if (!src.env.summable_with_weight(w)) {
    r.verdict = SummabilityReport::Verdict::divergent_envelope;
    return r;
  }
  r.tail_bound = src.env.tail_integral(w, src.t_end) + part.error_estimate;
  r.verdict = SummabilityReport::Verdict::certified_finite;
  return r;
}

}  // namespace iterem
