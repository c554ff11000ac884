#pragma once

#include <cassert>
#include <cmath>
#include <limits>

namespace varcalc {

// Extended real line with a single +infinity used for unattainable costs.
// Arithmetic saturates: inf + x = inf, k * inf = inf for k > 0.  NaN is
// always a bug; debug builds assert it away instead of letting it spread.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : v_(v) { assert(!std::isnan(v_)); }

  static constexpr ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const { return v_; }
  constexpr bool is_infinite() const {
    return v_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const { return !is_infinite(); }

  ExtReal& operator+=(ExtReal o) {
    v_ += o.v_;  // inf + finite and inf + inf both saturate to inf
    assert(!std::isnan(v_));
    return *this;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return a += b; }

  // Scale by a nonnegative factor.  0 * inf is defined as 0 (an empty
  // stretch of an unattainable path costs nothing).
  ExtReal scaled_by(double k) const {
    assert(k >= 0.0);
    if (k == 0.0) return ExtReal(0.0);
    return ExtReal(k * v_);
  }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend constexpr bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

inline ExtReal min(ExtReal a, ExtReal b) { return a < b ? a : b; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace varcalc
