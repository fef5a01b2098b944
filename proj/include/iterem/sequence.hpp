#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "iterem/envelope.hpp"
#include "iterem/norm.hpp"

namespace iterem {

// Values x_p, ..., x_{p+N} of a real sequence defined on N_p = {p, p+1, ...}.
class SequenceWindow {
 public:
  SequenceWindow(Index start, std::vector<double> values);

  static SequenceWindow generate(Index start, Index last,
                                 const std::function<double(Index)>& fn);
  static SequenceWindow zeros(Index start, Index last);

  Index start() const noexcept { return start_; }
  Index last() const noexcept { return start_ + static_cast<Index>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  bool contains(Index n) const noexcept { return n >= start_ && n <= last(); }

  // Absolute indexing, unchecked.
  double operator[](Index n) const { return values_[static_cast<std::size_t>(n - start_)]; }
  // Absolute indexing, throws IndexError.
  double at(Index n) const;

  std::span<const double> values() const noexcept { return values_; }

  SequenceWindow slice(Index first, Index last) const;

 private:
  Index start_;
  std::vector<double> values_;
};

// n (n+1) ... (n+m-1), with m = 0 giving 1. Throws OverflowError.
std::uint64_t rising_factorial(std::uint64_t n, std::uint64_t m);

// Delta^k x on [p, p+N-k], Delta x_n = x_{n+1} - x_n.
SequenceWindow forward_difference(const SequenceWindow& x, int k);

struct TailSum {
  double value;       // sum over the stored part
  double tail_bound;  // bound for everything past the window
  double upper() const { return value + tail_bound; }
};

// sum_{j >= n} j^weight |x_j|: stored part plus an envelope bound past the window.
TailSum weighted_tail_sum(const SequenceWindow& x, const DecayEnvelope& env,
                          double weight, Index from);

ExtendedNorm sup_metric(std::span<const double> f, std::span<const double> g);
ExtendedNorm sup_metric(const SequenceWindow& f, const SequenceWindow& g);

// Window distance plus the envelope-level bound on the unseen tails.
ExtendedNorm sup_metric_with_tails(const SequenceWindow& f, const DecayEnvelope& env_f,
                                   const SequenceWindow& g, const DecayEnvelope& env_g);

// A real interval; missing endpoints are unbounded.
class Interval {
 public:
  static Interval real_line() { return Interval(std::nullopt, std::nullopt); }
  static Interval closed(double lo, double hi) { return Interval(lo, hi); }
  static Interval at_least(double lo) { return Interval(lo, std::nullopt); }
  static Interval at_most(double hi) { return Interval(std::nullopt, hi); }
  static Interval empty();

  Interval(std::optional<double> lo, std::optional<double> hi);

  const std::optional<double>& lo() const noexcept { return lo_; }
  const std::optional<double>& hi() const noexcept { return hi_; }
  bool is_empty() const noexcept { return empty_; }
  bool is_bounded() const noexcept { return lo_.has_value() && hi_.has_value(); }
  bool contains(double t) const noexcept;

  // Intersection with [lo, hi].
  Interval clamp(double lo, double hi) const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  std::optional<double> lo_;
  std::optional<double> hi_;
  bool empty_ = false;
};

// {t : [t - margin, t + margin] inside U}
Interval framed_interior(const Interval& domain, double margin);

}  // namespace iterem
