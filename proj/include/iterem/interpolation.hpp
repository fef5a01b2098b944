#pragma once

#include <span>
#include <vector>

namespace iterem {

// Monotone piecewise-cubic Hermite interpolant: three-point slopes with the
// Hyman limiter, zero slope at local extrema. Never overshoots the data
// between knots, so interval constraints satisfied at the knots hold
// everywhere.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> knots, std::vector<double> values);

  double operator()(double t) const;

  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace iterem
