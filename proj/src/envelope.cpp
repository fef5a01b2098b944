#include "iterem/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "iterem/errors.hpp"

namespace iterem {

namespace {

// Longest explicit run summed before the ratio bound takes over.
constexpr Index kMaxExplicitTerms = 100'000'000;

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

DecayEnvelope DecayEnvelope::power(double scale, double beta, double valid_from) {
  if (!(scale >= 0.0) || !std::isfinite(scale) || !std::isfinite(beta)) {
    throw std::invalid_argument("DecayEnvelope::power: need finite C >= 0 and finite beta");
  }
  if (!(valid_from > 0.0)) {
    throw std::invalid_argument("DecayEnvelope::power: valid_from must be > 0");
  }
  return DecayEnvelope(Kind::power, scale, beta, valid_from);
}

DecayEnvelope DecayEnvelope::geometric(double scale, double q, double valid_from) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("DecayEnvelope::geometric: need finite C >= 0");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("DecayEnvelope::geometric: need 0 < q < 1");
  }
  if (!(valid_from >= 0.0)) {
    throw std::invalid_argument("DecayEnvelope::geometric: valid_from must be >= 0");
  }
  return DecayEnvelope(Kind::geometric, scale, q, valid_from);
}

DecayEnvelope DecayEnvelope::zero_beyond(double last_nonzero) {
  if (!std::isfinite(last_nonzero)) {
    throw std::invalid_argument("DecayEnvelope::zero_beyond: index must be finite");
  }
  return DecayEnvelope(Kind::zero, 0.0, 0.0, std::max(0.0, last_nonzero + 1.0));
}

DecayEnvelope DecayEnvelope::zero() { return DecayEnvelope(Kind::zero, 0.0, 0.0, 0.0); }

double DecayEnvelope::operator()(double s) const {
  switch (kind_) {
    case Kind::power:
      return scale_ * std::pow(s, -rate_);
    case Kind::geometric:
      return scale_ * std::pow(rate_, s);
    case Kind::zero:
      return 0.0;
  }
  return 0.0;
}

DecayEnvelope DecayEnvelope::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("DecayEnvelope::scaled: factor must be finite and >= 0");
  }
  DecayEnvelope out = *this;
  out.scale_ *= factor;
  return out;
}

bool DecayEnvelope::summable_with_weight(double weight) const {
  if (kind_ == Kind::power) return scale_ == 0.0 || rate_ - weight > 1.0;
  return true;
}

void DecayEnvelope::require_valid_at(double from) const {
  if (from < valid_from_) {
    throw InsufficientDataError("envelope " + describe() + " is not asserted at " +
                                fmt_num(from) + "; extend the stored data");
  }
}

double DecayEnvelope::tail_sum(double weight, Index from) const {
  if (from < 1) throw IndexError("DecayEnvelope::tail_sum: start index must be >= 1");
  require_valid_at(static_cast<double>(from));
  if (!summable_with_weight(weight)) {
    throw NonSummableError("sum of j^" + fmt_num(weight) + " * " + describe() + " diverges");
  }
  if (kind_ == Kind::zero || scale_ == 0.0) return 0.0;

  const double j0 = static_cast<double>(from);
  if (kind_ == Kind::power) {
    // j^-s summed from J: first term plus the integral over [J, inf).
    const double s = rate_ - weight;
    return scale_ * (std::pow(j0, -s) + std::pow(j0, 1.0 - s) / (s - 1.0));
  }

  const double q = rate_;
  const double log_q = std::log(q);
  auto term = [&](double j) { return scale_ * std::exp(weight * std::log(j) + j * log_q); };
  if (weight <= 0.0) return term(j0) / (1.0 - q);

  // Term ratio (1 + 1/j)^w q decreases in j. Sum explicitly until it drops
  // below (1 + q) / 2, then close with a geometric series.
  const double target = 0.5 * (1.0 + q);
  const double root = std::pow(target / q, 1.0 / weight) - 1.0;
  const double switch_at = std::max(j0, std::ceil(1.0 / root));
  if (switch_at - j0 > static_cast<double>(kMaxExplicitTerms)) {
    throw NonSummableError("tail bound for " + describe() + " needs too many explicit terms");
  }
  double sum = 0.0;
  for (double j = j0; j < switch_at; j += 1.0) sum += term(j);
  const double ratio = std::pow(1.0 + 1.0 / switch_at, weight) * q;
  return sum + term(switch_at) / (1.0 - ratio);
}

double DecayEnvelope::tail_integral(double weight, double from) const {
  if (from < 0.0) throw IndexError("DecayEnvelope::tail_integral: lower limit must be >= 0");
  require_valid_at(from);
  if (!summable_with_weight(weight)) {
    throw NonSummableError("integral of s^" + fmt_num(weight) + " * " + describe() +
                           " diverges");
  }
  if (kind_ == Kind::zero || scale_ == 0.0) return 0.0;

  if (kind_ == Kind::power) {
    if (from <= 0.0) {
      throw NonSummableError("power envelope is not integrable at 0");
    }
    const double s = rate_ - weight;
    return scale_ * std::pow(from, 1.0 - s) / (s - 1.0);
  }

  const double lambda = -std::log(rate_);
  const double t = from;
  if (weight == 0.0) return scale_ * std::exp(-lambda * t) / lambda;
  if (weight < 0.0) {
    if (t > 0.0) return scale_ * std::pow(t, weight) * std::exp(-lambda * t) / lambda;
    if (weight <= -1.0) throw NonSummableError("s^w with w <= -1 is not integrable at 0");
    return scale_ * (1.0 / (weight + 1.0) + std::exp(-lambda) / lambda);
  }
  // s^w e^{-lambda s} <= T^w e^{-lambda T} e^{-(lambda - w/T)(s - T)} for s >= T.
  const double split = 2.0 * weight / lambda;
  if (t >= split) {
    return scale_ * std::pow(t, weight) * std::exp(-lambda * t) / (lambda - weight / t);
  }
  const double peak = std::pow(weight / lambda, weight) * std::exp(-weight);
  const double head = (split - t) * peak;
  const double rest = std::pow(split, weight) * std::exp(-lambda * split) / (0.5 * lambda);
  return scale_ * (head + rest);
}

ExtendedNorm DecayEnvelope::sup_from(double from) const {
  require_valid_at(from);
  switch (kind_) {
    case Kind::zero:
      return ExtendedNorm::finite(0.0);
    case Kind::geometric:
      return ExtendedNorm::finite(scale_ * std::pow(rate_, from));
    case Kind::power:
      if (scale_ == 0.0) return ExtendedNorm::finite(0.0);
      if (rate_ < 0.0) return ExtendedNorm::infinite();
      return ExtendedNorm::finite(scale_ * std::pow(from, -rate_));
  }
  return ExtendedNorm::infinite();
}

std::string DecayEnvelope::describe() const {
  switch (kind_) {
    case Kind::power:
      return "power(C=" + fmt_num(scale_) + ", beta=" + fmt_num(rate_) + ") from " +
             fmt_num(valid_from_);
    case Kind::geometric:
      return "geometric(C=" + fmt_num(scale_) + ", q=" + fmt_num(rate_) + ") from " +
             fmt_num(valid_from_);
    case Kind::zero:
      return "zero from " + fmt_num(valid_from_);
  }
  return "?";
}

}  // namespace iterem
