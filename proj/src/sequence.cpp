#include "iterem/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "iterem/errors.hpp"

namespace iterem {

SequenceWindow::SequenceWindow(Index start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
  if (start_ < 1) throw IndexError("SequenceWindow: start index must be >= 1");
  if (values_.empty()) throw InsufficientDataError("SequenceWindow: window must hold a value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("SequenceWindow: non-finite value at index " +
                                  std::to_string(start_ + static_cast<Index>(i)));
    }
  }
}

SequenceWindow SequenceWindow::generate(Index start, Index last,
                                        const std::function<double(Index)>& fn) {
  if (last < start) throw InsufficientDataError("SequenceWindow::generate: empty range");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(last - start + 1));
  for (Index n = start; n <= last; ++n) v.push_back(fn(n));
  return SequenceWindow(start, std::move(v));
}

SequenceWindow SequenceWindow::zeros(Index start, Index last) {
  if (last < start) throw InsufficientDataError("SequenceWindow::zeros: empty range");
  return SequenceWindow(start, std::vector<double>(static_cast<std::size_t>(last - start + 1)));
}

double SequenceWindow::at(Index n) const {
  if (!contains(n)) {
    throw IndexError("index " + std::to_string(n) + " outside window [" +
                     std::to_string(start_) + ", " + std::to_string(last()) + "]");
  }
  return (*this)[n];
}

SequenceWindow SequenceWindow::slice(Index first, Index last_index) const {
  if (first > last_index || !contains(first) || !contains(last_index)) {
    throw IndexError("SequenceWindow::slice: range not inside window");
  }
  auto b = values_.begin() + (first - start_);
  auto e = values_.begin() + (last_index - start_ + 1);
  return SequenceWindow(first, std::vector<double>(b, e));
}

std::uint64_t rising_factorial(std::uint64_t n, std::uint64_t m) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t factor = n + i;
    if (factor < n) throw OverflowError("rising_factorial: factor overflows");
    if (__builtin_mul_overflow(acc, factor, &acc)) {
      throw OverflowError("rising_factorial(" + std::to_string(n) + ", " + std::to_string(m) +
                          ") does not fit in 64 bits");
    }
  }
  return acc;
}

SequenceWindow forward_difference(const SequenceWindow& x, int k) {
  if (k < 0) throw std::invalid_argument("forward_difference: k must be >= 0");
  if (static_cast<std::size_t>(k) >= x.size()) {
    throw InsufficientDataError("forward_difference: order " + std::to_string(k) +
                                " needs more than " + std::to_string(x.size()) + " values");
  }
  std::vector<double> v(x.values().begin(), x.values().end());
  for (int pass = 0; pass < k; ++pass) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
    v.pop_back();
  }
  return SequenceWindow(x.start(), std::move(v));
}

TailSum weighted_tail_sum(const SequenceWindow& x, const DecayEnvelope& env, double weight,
                          Index from) {
  if (from < x.start()) {
    throw IndexError("weighted_tail_sum: start " + std::to_string(from) +
                     " precedes window start " + std::to_string(x.start()));
  }
  if (!env.summable_with_weight(weight)) {
    throw NonSummableError("weighted_tail_sum: envelope " + env.describe() +
                           " is not summable against j^" + std::to_string(weight));
  }
  double value = 0.0;
  for (Index j = from; j <= x.last(); ++j) {
    value += std::pow(static_cast<double>(j), weight) * std::abs(x[j]);
  }
  const double tail = env.tail_sum(weight, std::max(from, x.last() + 1));
  return {value, tail};
}

ExtendedNorm sup_metric(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) {
    throw ShapeError("sup_metric: sizes differ (" + std::to_string(f.size()) + " vs " +
                     std::to_string(g.size()) + ")");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  if (!std::isfinite(m)) return ExtendedNorm::infinite();
  return ExtendedNorm::finite(m);
}

ExtendedNorm sup_metric(const SequenceWindow& f, const SequenceWindow& g) {
  if (f.start() != g.start() || f.size() != g.size()) {
    throw ShapeError("sup_metric: windows cover different index ranges");
  }
  return sup_metric(f.values(), g.values());
}

ExtendedNorm sup_metric_with_tails(const SequenceWindow& f, const DecayEnvelope& env_f,
                                   const SequenceWindow& g, const DecayEnvelope& env_g) {
  const ExtendedNorm inside = sup_metric(f, g);
  const double past = static_cast<double>(f.last() + 1);
  return ExtendedNorm::max(inside, env_f.sup_from(past) + env_g.sup_from(past));
}

Interval::Interval(std::optional<double> lo, std::optional<double> hi) : lo_(lo), hi_(hi) {
  if ((lo_ && !std::isfinite(*lo_)) || (hi_ && !std::isfinite(*hi_))) {
    throw std::invalid_argument("Interval: finite endpoints required; omit for unbounded");
  }
  empty_ = lo_ && hi_ && *lo_ > *hi_;
}

Interval Interval::empty() {
  Interval out(std::nullopt, std::nullopt);
  out.empty_ = true;
  return out;
}

bool Interval::contains(double t) const noexcept {
  if (empty_) return false;
  if (lo_ && t < *lo_) return false;
  if (hi_ && t > *hi_) return false;
  return true;
}

Interval Interval::clamp(double lo, double hi) const {
  if (empty_) return empty();
  const double a = lo_ ? std::max(*lo_, lo) : lo;
  const double b = hi_ ? std::min(*hi_, hi) : hi;
  if (a > b) return empty();
  return closed(a, b);
}

Interval framed_interior(const Interval& domain, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("framed_interior: margin must be > 0");
  if (domain.is_empty()) return Interval::empty();
  std::optional<double> lo, hi;
  if (domain.lo()) lo = *domain.lo() + margin;
  if (domain.hi()) hi = *domain.hi() - margin;
  if (lo && hi && *lo > *hi) return Interval::empty();
  return Interval(lo, hi);
}

}  // namespace iterem
