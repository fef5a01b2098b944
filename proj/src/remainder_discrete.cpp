#include "iterem/remainder_discrete.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "iterem/errors.hpp"

namespace iterem {

RemainderInput::RemainderInput(SequenceWindow x, DecayEnvelope env, int order)
    : x_(std::move(x)), env_(env), order_(order) {
  if (order_ < 1) throw std::invalid_argument("RemainderInput: order must be >= 1");
  if (!env_.summable_with_weight(order_ - 1)) {
    throw NonSummableError("RemainderInput: sum j^" + std::to_string(order_ - 1) + " * " +
                           env_.describe() + " diverges");
  }
}

double truncation_bound(const RemainderInput& in) {
  // C(j - n + m - 1, m - 1) <= j^(m-1) for j >= n >= 1.
  return in.envelope().tail_sum(in.order() - 1, in.x().last() + 1);
}

RemainderValue rm_value(const RemainderInput& in, Index n) {
  const SequenceWindow& x = in.x();
  if (n < x.start()) {
    throw IndexError("rm_value: index " + std::to_string(n) + " precedes window start " +
                     std::to_string(x.start()));
  }
  if (n > x.last()) {
    return {0.0, in.envelope().tail_sum(in.order() - 1, n)};
  }
  const auto values = x.values().subspan(static_cast<std::size_t>(n - x.start()));
  const auto coeff = kernels::remainder_coefficients(in.order(), values.size());
  double acc = 0.0;
  for (std::size_t k = values.size(); k-- > 0;) acc += coeff[k] * values[k];
  return {acc, truncation_bound(in)};
}

SequenceWindow rm_window(const RemainderInput& in, Index first, Index last, Execution exec) {
  const SequenceWindow& x = in.x();
  if (first > last || !x.contains(first) || !x.contains(last)) {
    throw IndexError("rm_window: range [" + std::to_string(first) + ", " +
                     std::to_string(last) + "] not inside window [" +
                     std::to_string(x.start()) + ", " + std::to_string(x.last()) + "]");
  }
  // The sums at every index need all stored values up to the window end.
  truncation_bound(in);
  const auto tail = x.values().subspan(static_cast<std::size_t>(first - x.start()));
  std::vector<double> out(tail.size());
  kernels::remainder_direct(tail, in.order(), out, exec);
  out.resize(static_cast<std::size_t>(last - first + 1));
  return SequenceWindow(first, std::move(out));
}

IdentityDeviation check_difference_identity(const RemainderInput& in, int k, Index first,
                                            Index last) {
  const int m = in.order();
  if (k < 0 || k > m) {
    throw std::invalid_argument("check_difference_identity: k must lie in [0, m]");
  }
  if (last + k > in.x().last()) {
    throw InsufficientDataError("check_difference_identity: range end " +
                                std::to_string(last) + " leaves no room for " +
                                std::to_string(k) + " differences");
  }
  const SequenceWindow lhs = forward_difference(rm_window(in, first, last + k), k);
  const SequenceWindow rhs =
      k == m ? in.x().slice(first, last) : rm_window(in.with_order(m - k), first, last);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;

  double worst = 0.0;
  for (Index n = first; n <= last; ++n) worst = std::max(worst, std::abs(lhs[n] - sign * rhs[n]));

  const double lhs_bound = std::ldexp(truncation_bound(in), k);
  const double rhs_bound = k == m ? 0.0 : truncation_bound(in.with_order(m - k));
  return {worst, lhs_bound + rhs_bound};
}

ExtendedNorm SummabilityReport::upper_bound() const {
  if (!certified()) return ExtendedNorm::infinite();
  return ExtendedNorm::finite(partial + tail_bound);
}

SummabilityReport summability_certificate(const DecayEnvelope& env, const SequenceWindow& x,
                                          int order, double alpha) {
  if (order < 1) throw std::invalid_argument("summability_certificate: order must be >= 1");
  if (alpha > 0.0) throw std::invalid_argument("summability_certificate: alpha must be <= 0");
  SummabilityReport r;
  r.exponent = order - 1 - alpha;
  for (Index j = x.start(); j <= x.last(); ++j) {
    r.partial += std::pow(static_cast<double>(j), r.exponent) * std::abs(x[j]);
  }
  if (!env.summable_with_weight(r.exponent)) {
    r.verdict = SummabilityReport::Verdict::divergent_envelope;
    return r;
  }
  r.tail_bound = env.tail_sum(r.exponent, x.last() + 1);
  r.verdict = SummabilityReport::Verdict::certified_finite;
  return r;
}

SummabilityReport summability_certificate(const DecayEnvelope& env, int order, double alpha,
                                          Index from) {
  if (order < 1) throw std::invalid_argument("summability_certificate: order must be >= 1");
  if (alpha > 0.0) throw std::invalid_argument("summability_certificate: alpha must be <= 0");
  SummabilityReport r;
  r.exponent = order - 1 - alpha;
  if (!env.summable_with_weight(r.exponent)) {
    r.verdict = SummabilityReport::Verdict::divergent_envelope;
    return r;
  }
  r.tail_bound = env.tail_sum(r.exponent, from);
  r.verdict = SummabilityReport::Verdict::certified_finite;
  return r;
}

}  // namespace iterem
