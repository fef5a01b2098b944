#pragma once

#include "iterem/envelope.hpp"
#include "iterem/kernels.hpp"
#include "iterem/sequence.hpp"

namespace iterem {

using kernels::Execution;

// A sequence known on a window plus an envelope for the rest, together with
// the order m of the remainder operator. Construction rejects envelopes for
// which sum j^(m-1) env(j) diverges.
class RemainderInput {
 public:
  RemainderInput(SequenceWindow x, DecayEnvelope env, int order);

  const SequenceWindow& x() const noexcept { return x_; }
  const DecayEnvelope& envelope() const noexcept { return env_; }
  int order() const noexcept { return order_; }

  RemainderInput with_order(int order) const { return RemainderInput(x_, env_, order); }

 private:
  SequenceWindow x_;
  DecayEnvelope env_;
  int order_;
};

struct RemainderValue {
  double value;
  double error_bound;  // bound on the part of the series past the window
};

// r^m x_n = sum_{j >= n} C(j - n + m - 1, m - 1) x_j
RemainderValue rm_value(const RemainderInput& in, Index n);

// r^m x on [first, last], evaluated on the stored window.
SequenceWindow rm_window(const RemainderInput& in, Index first, Index last,
                         Execution exec = Execution::parallel);

// Bound on the neglected tail that holds at every n >= p.
double truncation_bound(const RemainderInput& in);

struct IdentityDeviation {
  double max_deviation;  // measured
  double error_bound;    // combined truncation bound of the exact identity
};

// max_n |Delta^k r^m x_n - (-1)^k r^{m-k} x_n| over [first, last], r^0 = id.
IdentityDeviation check_difference_identity(const RemainderInput& in, int k, Index first,
                                            Index last);

struct SummabilityReport {
  enum class Verdict { certified_finite, divergent_envelope };

  double exponent = 0.0;  // m - 1 - alpha
  double partial = 0.0;
  double tail_bound = 0.0;
  Verdict verdict = Verdict::divergent_envelope;

  bool certified() const noexcept { return verdict == Verdict::certified_finite; }
  // partial + tail_bound, or infinite when the envelope diverges.
  ExtendedNorm upper_bound() const;
};

// Certificate for sum_{n >= p} n^(m-1-alpha) |x_n| < inf.
SummabilityReport summability_certificate(const DecayEnvelope& env, const SequenceWindow& x,
                                          int order, double alpha);
// Envelope alone, summed from `from`.
SummabilityReport summability_certificate(const DecayEnvelope& env, int order, double alpha,
                                          Index from = 1);

}  // namespace iterem
