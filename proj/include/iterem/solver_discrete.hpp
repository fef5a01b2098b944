#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iterem/remainder_discrete.hpp"
#include "iterem/sequence.hpp"

namespace iterem {

// Delta^m x_n = a_n f(n, x_n) + b_n, n >= p, sought as x = y + o(n^alpha)
// around an approximative solution y with Delta^m y = b.
struct DifferenceEquation {
  int order = 1;
  // The one-point defaults are placeholders that validate() rejects.
  SequenceWindow a = SequenceWindow::zeros(1, 1);
  DecayEnvelope a_env = DecayEnvelope::zero();
  SequenceWindow b = SequenceWindow::zeros(1, 1);
  SequenceWindow y = SequenceWindow::zeros(1, 1);
  std::function<double(Index, double)> f;  // must be pure
  double bound = 1.0;                      // M, |f| <= M on N_p x U
  std::optional<double> lipschitz;         // in the second argument, on U
  Interval domain = Interval::real_line();  // U
  double margin = 1.0;                      // mu
  double alpha = 0.0;

  Index start() const { return a.start(); }
  Index last() const { return a.last(); }
};

// Throws std::invalid_argument / ShapeError on malformed data.
void validate(const DifferenceEquation& eq);

struct HypothesisCheck {
  std::string name;
  bool passed;
  std::string detail;
};

// Named checks, in the order reported.
inline constexpr const char* kForcingBoundCheck = "weighted_forcing_bound";
inline constexpr const char* kInteriorCheck = "approximant_in_framed_interior";
inline constexpr const char* kApproximantCheck = "approximant_solves_unforced_equation";
inline constexpr const char* kBoundSampleCheck = "nonlinearity_bound_sampled";

struct HypothesisReport {
  SummabilityReport weighted_sum;  // sum n^(m-1-alpha) |a_n|
  double forcing_bound = 0.0;      // M * (partial + tail), certified upper bound
  double margin = 0.0;
  std::vector<HypothesisCheck> checks;

  bool passed() const;
  const HypothesisCheck* first_failure() const;
};

// Relative slack for comparing a certified bound against the margin; it
// absorbs summation roundoff when the two agree analytically.
inline constexpr double kBoundComparisonSlack = 1e-12;

HypothesisReport check_hypotheses(const DifferenceEquation& eq);

// Ax = y + (-1)^m r^m (a f(., x)) on the window.
SequenceWindow apply_A(const DifferenceEquation& eq, const SequenceWindow& x,
                       Execution exec = Execution::parallel);

// Bound on what the window truncation of r^m neglects in apply_A.
double operator_truncation_bound(const DifferenceEquation& eq);

// max over [first, last] of |Delta^m x_n - a_n f(n, x_n) - b_n|.
double residual(const DifferenceEquation& eq, const SequenceWindow& x, Index first, Index last);
// Over every index with room for m differences.
double residual(const DifferenceEquation& eq, const SequenceWindow& x);

struct DeviationPoint {
  double at;     // n or t
  double value;  // |x - y| * at^(-alpha)
};

std::vector<DeviationPoint> asymptotic_deviation(const SequenceWindow& x, const SequenceWindow& y,
                                                 double alpha,
                                                 const std::vector<Index>& checkpoints);

enum class SolveStatus { converged, max_iterations, hypothesis_failed };

std::string to_string(SolveStatus s);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 200;
  Execution exec = Execution::parallel;
};

struct SolveResult {
  SequenceWindow x;
  int iterations = 0;
  std::vector<double> trace{};  // sup-metric gap after each application of A
  double residual_max = 0.0;
  double truncation_bound = 0.0;
  std::vector<DeviationPoint> deviation_profile{};
  SolveStatus status = SolveStatus::hypothesis_failed;
  HypothesisReport hypotheses;
};

// Picard iteration x_{k+1} = A x_k from x_0 = y.
SolveResult solve(const DifferenceEquation& eq, const SolveOptions& opts = {});

}  // namespace iterem
