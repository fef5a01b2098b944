#include "iterem/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace iterem {

PanelEstimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = gk15::kronrod_weights[7] * fc;
  double gauss = gk15::gauss_weights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * gk15::abscissae[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += gk15::kronrod_weights[i] * pair;
    if (i % 2 == 1) gauss += gk15::gauss_weights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be > 0");
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<Panel> heap;
  const PanelEstimate first = gauss_kronrod15(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_err = first.error;
  double abs_mass = std::abs(first.value);

  int splits = 0;
  auto done = [&] {
    const double floor = 50.0 * eps * abs_mass;
    return total_err <= std::max(cfg.abs_tol, floor);
  };
  while (!done() && splits < cfg.max_subdivisions) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Panel too narrow to split further in double precision.
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const PanelEstimate left = gauss_kronrod15(f, worst.a, mid);
    const PanelEstimate right = gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    abs_mass += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++splits;
  }

  // Re-add from the panels to shed drift from the running updates.
  double value = 0.0;
  double err = 0.0;
  abs_mass = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    abs_mass += std::abs(heap.top().value);
    heap.pop();
  }
  out.value = sign * value;
  out.error_estimate = err;
  out.subdivisions = splits;
  out.converged = err <= std::max(cfg.abs_tol, 50.0 * eps * abs_mass);
  return out;
}

}  // namespace iterem
