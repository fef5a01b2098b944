#include "iterem/norm.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "iterem/errors.hpp"

namespace iterem {

ExtendedNorm ExtendedNorm::finite(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("ExtendedNorm::finite: value must be finite and >= 0");
  }
  return ExtendedNorm(value, false);
}

double ExtendedNorm::value() const {
  if (infinite_) throw Error("ExtendedNorm::value: norm is infinite");
  return value_;
}

ExtendedNorm ExtendedNorm::operator+(const ExtendedNorm& other) const {
  if (infinite_ || other.infinite_) return infinite();
  const double sum = value_ + other.value_;
  // Overflow of a finite sum means the bound is not representable.
  if (!std::isfinite(sum)) return infinite();
  return ExtendedNorm(sum, false);
}

ExtendedNorm ExtendedNorm::max(const ExtendedNorm& a, const ExtendedNorm& b) {
  if (a.infinite_) return a;
  if (b.infinite_) return b;
  return a.value_ >= b.value_ ? a : b;
}

std::string ExtendedNorm::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

}  // namespace iterem
