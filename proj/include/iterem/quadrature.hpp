#pragma once

#include <array>
#include <functional>

namespace iterem {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half, descending)
// with the matching Kronrod and Gauss weights. Odd-indexed abscissae are
// the Gauss points.
namespace gk15 {
inline constexpr std::array<double, 8> abscissae = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

struct PanelEstimate {
  double value;
  double error;  // |Kronrod - Gauss|
};

PanelEstimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b);

// Globally adaptive bisection on the panel with the largest error estimate
// until the summed estimate falls below max(abs_tol, roundoff floor).
// Never throws on non-convergence; check `converged`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

}  // namespace iterem
