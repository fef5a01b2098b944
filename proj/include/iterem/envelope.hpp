#pragma once

#include <cstdint>
#include <string>

#include "iterem/norm.hpp"

namespace iterem {

using Index = std::int64_t;

// A caller-asserted pointwise bound |x(s)| <= env(s) for s >= valid_from.
// Used to turn infinite tail sums and tail integrals into certified upper
// bounds. The same object serves sequences (s = j) and functions (s real).
class DecayEnvelope {
 public:
  enum class Kind { power, geometric, zero };

  // C * s^(-beta)
  static DecayEnvelope power(double scale, double beta, double valid_from = 1.0);
  // C * q^s, 0 < q < 1
  static DecayEnvelope geometric(double scale, double q, double valid_from = 1.0);
  // zero for every index past `last_nonzero`
  static DecayEnvelope zero_beyond(double last_nonzero);
  // identically zero bound (valid from 0)
  static DecayEnvelope zero();

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double rate() const noexcept { return rate_; }  // beta for power, q for geometric
  double valid_from() const noexcept { return valid_from_; }

  double operator()(double s) const;

  DecayEnvelope scaled(double factor) const;

  // Is sum_j j^w env(j) (equivalently the integral of s^w env(s)) finite?
  bool summable_with_weight(double weight) const;

  // Upper bound for sum_{j >= from} j^weight * env(j). Requires from >= 1.
  double tail_sum(double weight, Index from) const;

  // Upper bound for the integral over [from, inf) of s^weight * env(s).
  double tail_integral(double weight, double from) const;

  // sup_{s >= from} env(s); infinite for a growing power law.
  ExtendedNorm sup_from(double from) const;

  std::string describe() const;

 private:
  DecayEnvelope(Kind kind, double scale, double rate, double valid_from)
      : kind_(kind), scale_(scale), rate_(rate), valid_from_(valid_from) {}

  void require_valid_at(double from) const;

  Kind kind_;
  double scale_;
  double rate_;
  double valid_from_;
};

}  // namespace iterem
