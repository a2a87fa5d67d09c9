#pragma once

#include <limits>

namespace fkqsd {

/// A real number or the singular value +inf.
///
/// The singular value is a flag, not an IEEE infinity: a finite value that
/// overflowed during evaluation stays finite (clamped to the largest double).
class ExtendedReal {
 public:
  constexpr explicit ExtendedReal(double value) noexcept
      : value_(value > std::numeric_limits<double>::max() ? std::numeric_limits<double>::max()
                                                          : value) {}

  static constexpr ExtendedReal infinity() noexcept {
    ExtendedReal r(0.0);
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_infinite() const noexcept { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const noexcept { return !infinite_; }

  /// The finite value; meaningless when is_infinite().
  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  /// IEEE view: +inf for the singular value.
  [[nodiscard]] constexpr double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) noexcept {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace fkqsd
