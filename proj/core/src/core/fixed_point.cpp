#include "arrowlab/core/fixed_point.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "arrowlab/core/error.hpp"

namespace arrowlab::core {
namespace {

__extension__ typedef __int128 i128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

std::int64_t narrow_checked(i128 v, const char* what) {
  if (v > kMax || v < kMin) {
    throw OverflowError(fmt::format("fixed-point overflow in {}", what));
  }
  return static_cast<std::int64_t>(v);
}

// 5^20: raw / 2^20 == raw * 5^20 / 10^20.
constexpr i128 kPow5 = 95367431640625;
constexpr int kDecimals = FixedPoint::kFractionBits;

i128 pow10(int n) {
  i128 p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

}  // namespace

FixedPoint FixedPoint::from_int(std::int64_t value) {
  return from_raw(narrow_checked(static_cast<i128>(value) * kScale, "from_int"));
}

FixedPoint FixedPoint::from_double(double value) {
  const double scaled = std::round(value * static_cast<double>(kScale));
  if (!std::isfinite(scaled) || scaled >= 9.2233720368547758e18 || scaled < -9.2233720368547758e18) {
    throw OverflowError(fmt::format("fixed-point overflow converting {}", value));
  }
  return from_raw(static_cast<std::int64_t>(scaled));
}

FixedPoint FixedPoint::from_ratio_pow2(std::int64_t num, int shift) {
  if (shift < 0) throw DomainError("from_ratio_pow2: negative shift");
  if (shift <= kFractionBits) {
    return from_raw(narrow_checked(static_cast<i128>(num) << (kFractionBits - shift), "from_ratio_pow2"));
  }
  const int drop = shift - kFractionBits;
  if (drop >= 63 || num % (std::int64_t{1} << drop) != 0) {
    throw DomainError(fmt::format("{}/2^{} is not representable", num, shift));
  }
  return from_raw(num / (std::int64_t{1} << drop));
}

FixedPoint FixedPoint::operator-() const {
  if (raw_ == kMin) throw OverflowError("fixed-point overflow in negation");
  return from_raw(-raw_);
}

FixedPoint& FixedPoint::operator+=(FixedPoint other) {
  if (__builtin_add_overflow(raw_, other.raw_, &raw_)) throw OverflowError("fixed-point overflow in addition");
  return *this;
}

FixedPoint& FixedPoint::operator-=(FixedPoint other) {
  if (__builtin_sub_overflow(raw_, other.raw_, &raw_)) throw OverflowError("fixed-point overflow in subtraction");
  return *this;
}

FixedPoint operator*(FixedPoint a, FixedPoint b) {
  // Integer division truncates toward zero.
  const i128 product = static_cast<i128>(a.raw_) * static_cast<i128>(b.raw_) / FixedPoint::kScale;
  return FixedPoint::from_raw(narrow_checked(product, "multiplication"));
}

FixedPoint operator*(FixedPoint a, std::int64_t k) {
  return FixedPoint::from_raw(narrow_checked(static_cast<i128>(a.raw_) * k, "integer multiplication"));
}

std::string FixedPoint::to_string() const {
  const bool negative = raw_ < 0;
  i128 magnitude = static_cast<i128>(raw_);
  if (negative) magnitude = -magnitude;
  const i128 scaled = magnitude * kPow5;  // value * 10^20
  const i128 unit = pow10(kDecimals);
  const auto int_part = static_cast<unsigned long long>(scaled / unit);
  i128 frac = scaled % unit;

  std::string out = negative ? "-" : "";
  out += std::to_string(int_part);
  if (frac != 0) {
    std::string digits(kDecimals, '0');
    for (int i = kDecimals - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
      frac /= 10;
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

FixedPoint FixedPoint::parse(std::string_view text) {
  const auto fail = [&] { return DomainError(fmt::format("not an exact fixed-point decimal: '{}'", text)); };
  if (text.empty()) throw fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  i128 int_part = 0;
  std::size_t int_digits = 0;
  for (; pos < text.size() && text[pos] != '.'; ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw fail();
    int_part = int_part * 10 + (c - '0');
    if (int_part > kMax) throw OverflowError(fmt::format("fixed-point overflow parsing '{}'", text));
    ++int_digits;
  }
  i128 frac = 0;
  int frac_digits = 0;
  if (pos < text.size()) {
    ++pos;  // '.'
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c < '0' || c > '9' || frac_digits >= kDecimals) throw fail();
      frac = frac * 10 + (c - '0');
      ++frac_digits;
    }
    if (frac_digits == 0) throw fail();
  }
  if (int_digits == 0) throw fail();

  // frac / 10^d must equal k / 2^20 for an integer k: k = frac * 2^20 / 10^d.
  const i128 denom = pow10(frac_digits);
  const i128 numer = frac * FixedPoint::kScale;
  if (numer % denom != 0) throw fail();
  i128 raw = int_part * FixedPoint::kScale + numer / denom;
  if (negative) raw = -raw;
  return from_raw(narrow_checked(raw, "parse"));
}

}  // namespace arrowlab::core
