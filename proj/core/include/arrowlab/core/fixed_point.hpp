#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace arrowlab::core {

/// Signed 64-bit fixed-point number with a power-of-two denominator.
///
/// The value represented is raw / 2^kFractionBits. Addition, subtraction
/// and negation are exact; multiplication truncates toward zero. Every
/// operation that would leave the 64-bit range throws OverflowError.
class FixedPoint {
 public:
  static constexpr int kFractionBits = 20;
  static constexpr std::int64_t kScale = std::int64_t{1} << kFractionBits;

  constexpr FixedPoint() = default;

  static constexpr FixedPoint from_raw(std::int64_t raw) {
    FixedPoint f;
    f.raw_ = raw;
    return f;
  }
  static FixedPoint from_int(std::int64_t value);
  /// Nearest representable value (ties away from zero).
  static FixedPoint from_double(double value);
  /// Exact ratio num / 2^shift; throws if not representable.
  static FixedPoint from_ratio_pow2(std::int64_t num, int shift);

  /// Parses the exact decimal form produced by to_string(). Decimal inputs
  /// that are not an exact multiple of 2^-20 are rejected.
  static FixedPoint parse(std::string_view text);

  constexpr std::int64_t raw() const { return raw_; }
  double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

  /// Exact decimal rendering, e.g. "-3.0009765625". Integers render without
  /// a fractional part.
  std::string to_string() const;

  FixedPoint operator-() const;
  FixedPoint& operator+=(FixedPoint other);
  FixedPoint& operator-=(FixedPoint other);

  friend FixedPoint operator+(FixedPoint a, FixedPoint b) { return a += b; }
  friend FixedPoint operator-(FixedPoint a, FixedPoint b) { return a -= b; }
  friend FixedPoint operator*(FixedPoint a, FixedPoint b);
  /// Multiplication by an integer is exact (no rounding).
  friend FixedPoint operator*(FixedPoint a, std::int64_t k);

  constexpr friend auto operator<=>(FixedPoint, FixedPoint) = default;
  constexpr friend bool operator==(FixedPoint, FixedPoint) = default;

 private:
  std::int64_t raw_ = 0;
};

/// 2-D vector of fixed-point coordinates.
struct FixedVec2 {
  FixedPoint x;
  FixedPoint y;

  constexpr friend bool operator==(const FixedVec2&, const FixedVec2&) = default;
  friend FixedVec2 operator+(FixedVec2 a, FixedVec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend FixedVec2 operator-(FixedVec2 a, FixedVec2 b) { return {a.x - b.x, a.y - b.y}; }
  FixedVec2 operator-() const { return {-x, -y}; }
};

}  // namespace arrowlab::core
