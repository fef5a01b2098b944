#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "iterem/envelope.hpp"
#include "iterem/norm.hpp"
#include "iterem/quadrature.hpp"
#include "iterem/remainder_discrete.hpp"

namespace iterem {

// A function on [t0, inf) given by a callback on [t0, t_end] and a declared
// envelope for |f(s)|, s >= t_end.
struct ContinuousSource {
  std::function<double(double)> f;
  DecayEnvelope env = DecayEnvelope::zero();
  double t0 = 0.0;
  double t_end = 0.0;
};

// Values on a strictly increasing grid starting at t0. `env` (optional)
// bounds |f(s)| past the last grid point.
class GridFunction {
 public:
  GridFunction(std::vector<double> grid, std::vector<double> values,
               std::optional<DecayEnvelope> env = std::nullopt);

  static GridFunction sample(const std::vector<double>& grid,
                             const std::function<double(double)>& f,
                             std::optional<DecayEnvelope> env = std::nullopt);

  double t0() const { return grid_.front(); }
  double t_end() const { return grid_.back(); }
  std::size_t size() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<DecayEnvelope>& envelope() const { return env_; }

  // Monotone cubic interpolant plus envelope. Throws if no envelope is set.
  ContinuousSource as_source() const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  std::optional<DecayEnvelope> env_;
};

ExtendedNorm sup_metric(const GridFunction& f, const GridFunction& g);

// (r^m f)(t) = integral over [t, inf) of (s - t)^(m-1) / (m-1)! f(s) ds.
// error_bound = quadrature estimate + integral of s^(m-1) env(s) past t_end.
RemainderValue rm_cont(const ContinuousSource& src, int order, double t,
                       const QuadratureConfig& q = {});

struct OrderSwapCheck {
  double iterated;  // integral_a^b integral_t^b (s-t)^m/m! f(s) ds dt
  double single;    // integral_a^b (s-a)^(m+1)/(m+1)! f(s) ds
  double deviation;
};

OrderSwapCheck fubini_check(const std::function<double(double)>& f, double a, double b,
                            int m, const QuadratureConfig& q = {});

struct DerivativeCheck {
  double difference;  // k-th central difference of t -> r^m f(t)
  double identity;    // (-1)^k r^{m-k} f(t), r^0 f = f
  double deviation;
  double step;
};

// Default step 1e-3 * max(1, t).
double default_difference_step(double t);

// The stencil is applied under the integral in the shifted variable
// u = s - t, so all shifts share one quadrature and the difference quotient
// sees no quadrature noise.
DerivativeCheck derivative_identity_check(const ContinuousSource& src, int order, int k,
                                          double t, std::optional<double> step = std::nullopt,
                                          const QuadratureConfig& q = {});

// Envelope only: integral of s^(m-1-alpha) env(s) over [t0, inf).
SummabilityReport integrability_certificate(const DecayEnvelope& env, int order, double alpha,
                                            double t0);
// Quadrature of s^(m-1-alpha) |f(s)| over [t0, t_end] plus the envelope tail.
SummabilityReport integrability_certificate(const ContinuousSource& src, int order,
                                            double alpha, const QuadratureConfig& q = {});

}  // namespace iterem
