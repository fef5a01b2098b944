#include "iterem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "iterem/quadrature.hpp"

namespace iterem::kernels {

bool parallel_available() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> remainder_coefficients(int order, std::size_t count) {
  if (order < 1) throw std::invalid_argument("remainder_coefficients: order must be >= 1");
  std::vector<double> c(count);
  if (count == 0) return c;
  c[0] = 1.0;
  for (std::size_t k = 1; k < count; ++k) {
    c[k] = c[k - 1] * static_cast<double>(k + static_cast<std::size_t>(order) - 1) /
           static_cast<double>(k);
  }
  return c;
}

namespace {

void check_sizes(std::span<const double> x, std::span<double> out) {
  if (out.size() != x.size()) throw std::invalid_argument("remainder kernel: size mismatch");
}

inline double direct_at(std::span<const double> x, const std::vector<double>& c,
                        std::size_t i) {
  double acc = 0.0;
  for (std::size_t j = x.size(); j-- > i;) acc += c[j - i] * x[j];
  return acc;
}

}  // namespace

void remainder_direct_serial(std::span<const double> x, int order, std::span<double> out) {
  check_sizes(x, out);
  const auto c = remainder_coefficients(order, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = direct_at(x, c, i);
}

void remainder_direct_parallel(std::span<const double> x, int order, std::span<double> out) {
  check_sizes(x, out);
  const auto c = remainder_coefficients(order, x.size());
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = direct_at(x, c, static_cast<std::size_t>(i));
  }
}

void remainder_direct(std::span<const double> x, int order, std::span<double> out,
                      Execution exec) {
  if (exec == Execution::parallel) {
    remainder_direct_parallel(x, order, out);
  } else {
    remainder_direct_serial(x, order, out);
  }
}

void remainder_suffix(std::span<const double> x, int order, std::span<double> out) {
  check_sizes(x, out);
  if (order < 1) throw std::invalid_argument("remainder_suffix: order must be >= 1");
  std::vector<double> cur(x.begin(), x.end());
  for (int pass = 0; pass < order; ++pass) {
    double acc = 0.0;
    for (std::size_t j = cur.size(); j-- > 0;) {
      acc += cur[j];
      cur[j] = acc;
    }
  }
  std::copy(cur.begin(), cur.end(), out.begin());
}

PanelRule gauss_kronrod_panels(std::span<const double> grid) {
  PanelRule rule;
  rule.per_panel = 15;
  if (grid.size() < 2) return rule;
  const std::size_t panels = grid.size() - 1;
  rule.nodes.reserve(panels * 15);
  rule.weights.reserve(panels * 15);
  rule.check_weights.reserve(panels * 15);
  for (std::size_t j = 0; j < panels; ++j) {
    const double a = grid[j];
    const double b = grid[j + 1];
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < 7; ++i) {
      const double kw = half * gk15::kronrod_weights[i];
      const double gw = (i % 2 == 1) ? half * gk15::gauss_weights[i / 2] : 0.0;
      rule.nodes.push_back(center - half * gk15::abscissae[i]);
      rule.weights.push_back(kw);
      rule.check_weights.push_back(gw);
    }
    rule.nodes.push_back(center);
    rule.weights.push_back(half * gk15::kronrod_weights[7]);
    rule.check_weights.push_back(half * gk15::gauss_weights[3]);
    for (int i = 6; i >= 0; --i) {
      const double kw = half * gk15::kronrod_weights[i];
      const double gw = (i % 2 == 1) ? half * gk15::gauss_weights[i / 2] : 0.0;
      rule.nodes.push_back(center + half * gk15::abscissae[i]);
      rule.weights.push_back(kw);
      rule.check_weights.push_back(gw);
    }
  }
  return rule;
}

namespace {

inline double kernel_power(double u, int order, double inv_factorial) {
  double p = 1.0;
  for (int e = 1; e < order; ++e) p *= u;
  return p * inv_factorial;
}

inline void grid_remainder_at(std::span<const double> grid, const PanelRule& rule,
                              std::span<const double> values, int order,
                              double inv_factorial, std::size_t i, double& out, double& err) {
  const double t = grid[i];
  const std::size_t panels = rule.panel_count();
  double acc = 0.0;
  double acc_err = 0.0;
  for (std::size_t j = panels; j-- > i;) {
    double hi = 0.0;
    double lo = 0.0;
    const std::size_t base = j * rule.per_panel;
    for (std::size_t q = base; q < base + rule.per_panel; ++q) {
      const double w = kernel_power(rule.nodes[q] - t, order, inv_factorial) * values[q];
      hi += rule.weights[q] * w;
      lo += rule.check_weights[q] * w;
    }
    acc += hi;
    acc_err += std::abs(hi - lo);
  }
  out = acc;
  err = acc_err;
}

void check_grid_args(std::span<const double> grid, const PanelRule& rule,
                     std::span<const double> values, int order, std::span<double> out,
                     std::span<double> err) {
  if (order < 1) throw std::invalid_argument("grid_remainder: order must be >= 1");
  if (grid.size() < 2 || rule.panel_count() != grid.size() - 1) {
    throw std::invalid_argument("grid_remainder: rule does not match grid");
  }
  if (values.size() != rule.nodes.size()) {
    throw std::invalid_argument("grid_remainder: one value per node required");
  }
  if (out.size() != grid.size() || err.size() != grid.size()) {
    throw std::invalid_argument("grid_remainder: output must match grid size");
  }
}

double inverse_factorial(int order) {
  double f = 1.0;
  for (int k = 2; k < order; ++k) f *= k;
  return 1.0 / f;
}

}  // namespace

void grid_remainder_serial(std::span<const double> grid, const PanelRule& rule,
                           std::span<const double> values, int order, std::span<double> out,
                           std::span<double> err) {
  check_grid_args(grid, rule, values, order, out, err);
  const double inv = inverse_factorial(order);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid_remainder_at(grid, rule, values, order, inv, i, out[i], err[i]);
  }
}

void grid_remainder_parallel(std::span<const double> grid, const PanelRule& rule,
                             std::span<const double> values, int order,
                             std::span<double> out, std::span<double> err) {
  check_grid_args(grid, rule, values, order, out, err);
  const double inv = inverse_factorial(order);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    grid_remainder_at(grid, rule, values, order, inv, k, out[k], err[k]);
  }
}

void grid_remainder(std::span<const double> grid, const PanelRule& rule,
                    std::span<const double> values, int order, std::span<double> out,
                    std::span<double> err, Execution exec) {
  if (exec == Execution::parallel) {
    grid_remainder_parallel(grid, rule, values, order, out, err);
  } else {
    grid_remainder_serial(grid, rule, values, order, out, err);
  }
}

}  // namespace iterem::kernels
