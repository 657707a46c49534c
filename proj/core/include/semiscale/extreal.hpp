#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace semiscale {

/// Extended real scalar over [-inf, +inf): a finite double or the bottom
/// element -inf (absent edge). +inf and NaN are not representable; walk-weight
/// divergence is tracked out of band, never stored as a value.
///
/// Max-plus arithmetic comes for free from IEEE doubles once NaN and +inf are
/// excluded: bottom + a == bottom and max(bottom, a) == a.
class ExtReal {
 public:
  constexpr ExtReal() : v_(-std::numeric_limits<double>::infinity()) {}

  explicit ExtReal(double v) : v_(v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not a value");
    if (v == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("ExtReal: +inf is not a value");
  }

  static constexpr ExtReal bottom() { return ExtReal{}; }

  constexpr bool is_bottom() const { return v_ == -std::numeric_limits<double>::infinity(); }
  constexpr bool is_finite() const { return !is_bottom(); }
  constexpr double value() const { return v_; }

  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) {
    ExtReal r;
    r.v_ = a.v_ + b.v_;  // -inf absorbs; no +inf/NaN can arise
    return r;
  }

  friend constexpr ExtReal max(ExtReal a, ExtReal b) { return a.v_ >= b.v_ ? a : b; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

 private:
  double v_;
};

}  // namespace semiscale
