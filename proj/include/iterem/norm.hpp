#pragma once

#include <compare>
#include <string>

namespace iterem {

// A value in [0, inf]. Infinity is a tag, never a floating-point inf.
class ExtendedNorm {
 public:
  static ExtendedNorm finite(double value);
  static ExtendedNorm infinite() { return ExtendedNorm(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  // Throws iterem::Error when infinite.
  double value() const;

  ExtendedNorm operator+(const ExtendedNorm& other) const;
  static ExtendedNorm max(const ExtendedNorm& a, const ExtendedNorm& b);

  friend bool operator==(const ExtendedNorm& a, const ExtendedNorm& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const ExtendedNorm& a, const ExtendedNorm& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  ExtendedNorm(double value, bool infinite) : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

}  // namespace iterem
