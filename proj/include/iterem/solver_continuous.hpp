#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "iterem/quadrature.hpp"
#include "iterem/remainder_continuous.hpp"
#include "iterem/sequence.hpp"
#include "iterem/solver_discrete.hpp"

namespace iterem {

// Grid with geometrically growing steps: h_i = first_step * (1 + growth)^i,
// capped at t_end. With first_step = growth * t0 this is t0 (1 + growth)^i.
struct GridSpec {
  double first_step = 0.005;
  double growth = 0.01;
  double t_end = 40.0;
};

std::vector<double> make_grid(double t0, const GridSpec& spec);

// x^(m)(t) = a(t) f(t, x(t)) + b(t), t > t0, sought as x = y + o(t^alpha).
struct OdeProblem {
  int order = 1;
  double t0 = 0.0;
  std::function<double(double)> a;
  DecayEnvelope a_env = DecayEnvelope::zero();  // bounds |a(s)| for s >= grid.t_end
  std::function<double(double)> b;
  std::function<double(double)> y;          // y^(m) = b
  std::function<double(double, double)> f;  // must be pure
  double bound = 1.0;
  std::optional<double> lipschitz;
  Interval domain = Interval::real_line();
  double margin = 1.0;
  double alpha = 0.0;
  QuadratureConfig quadrature{1e-10, 4000};
  GridSpec grid;
};

void validate(const OdeProblem& eq);

struct OdeHypothesisReport : HypothesisReport {
  // Bound on the slope of every image A x, x in Q: M sup|a| for m = 1,
  // M * integral s^(m-2)|a| for m >= 2.
  double slope_bound = 0.0;
};

OdeHypothesisReport check_hypotheses_ode(const OdeProblem& eq);

struct OdeOperatorImage {
  GridFunction x;
  double error_bound;  // panel quadrature estimate + envelope tail
};

// (Ax)(t_i) = y(t_i) + (-1)^m r^m (a f(., x))(t_i) on the grid of x, with x
// between grid points from the monotone cubic interpolant.
OdeOperatorImage apply_A_ode(const OdeProblem& eq, const GridFunction& x,
                             Execution exec = Execution::parallel);

struct ResidualReport {
  double max;
  double step;
  int accuracy_order = 2;  // central differences: O(h^2) truncation floor
};

ResidualReport residual_ode(const OdeProblem& eq, const std::function<double(double)>& x,
                            const std::vector<double>& samples, double step);
ResidualReport residual_ode(const OdeProblem& eq, const GridFunction& x,
                            const std::vector<double>& samples, double step);

// Grid points whose m-th difference stencil of width m*step stays clear of
// the first and last panel.
std::vector<double> residual_samples(const GridFunction& x, int order, double step);

// Largest difference quotient over consecutive grid points and the family.
double equicontinuity_modulus(const std::vector<GridFunction>& family);

std::vector<DeviationPoint> asymptotic_deviation_ode(const GridFunction& x,
                                                     const std::function<double(double)>& y,
                                                     double alpha,
                                                     const std::vector<double>& checkpoints);

struct OdeSolveOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double residual_step = 1e-3;
  Execution exec = Execution::parallel;
};

struct OdeSolveResult {
  GridFunction x;
  int iterations = 0;
  std::vector<double> trace{};
  ResidualReport residual{0.0, 0.0};
  double error_bound = 0.0;  // of the last operator application
  std::vector<DeviationPoint> deviation_profile{};
  SolveStatus status = SolveStatus::hypothesis_failed;
  OdeHypothesisReport hypotheses;
  double slope_modulus = 0.0;  // equicontinuity_modulus over all images A x_k
};

OdeSolveResult solve_ode(const OdeProblem& eq, const OdeSolveOptions& opts = {});

}  // namespace iterem
