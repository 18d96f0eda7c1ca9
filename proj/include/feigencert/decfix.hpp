#pragma once

// Exact decimal fixed-point numbers and outward-rounded decimal intervals.
//
// A FixedDec is sign * mantissa * 10^-scale with an arbitrary-precision
// mantissa. Addition, subtraction and multiplication are exact; the only
// places where digits are dropped are roundToScale and divRound, and both
// take an explicit rounding direction. DecInterval builds enclosure
// arithmetic on top: every interval operation returns a superset of the
// exact image, with endpoints rounded outward to a caller-chosen scale.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace feigencert {

/// Number of decimal digits after the point.
using Scale = std::size_t;

/// Directed rounding. Down and Up are toward -inf and +inf respectively,
/// so interval endpoints stay correctly directed for negative values.
/// Nearest breaks ties away from zero.
enum class Rounding { Down, Up, Nearest };

/// 10^k as a big integer. Cached; safe to call from several threads.
const mpz_class& powerOfTen(Scale k);

class FixedDec {
 public:
  FixedDec() = default;
  /// Value units * 10^-scale. `units` carries the sign.
  FixedDec(mpz_class units, Scale scale);
  explicit FixedDec(long value);

  /// Parses `[+-]digits[.digits]`; at least one digit is required.
  /// Throws std::invalid_argument on malformed input.
  static FixedDec parse(std::string_view text);

  /// +1 or -1; canonical zero reports +1.
  int sign() const { return units_ < 0 ? -1 : +1; }
  /// -1, 0 or +1.
  int signum() const { return sgn(units_); }
  bool isZero() const { return units_ == 0; }

  /// Absolute value of the signed mantissa.
  mpz_class mantissa() const { return mpz_class(::abs(units_)); }
  const mpz_class& units() const { return units_; }
  Scale scale() const { return scale_; }

  /// Same value at a scale >= scale(). Exact.
  FixedDec rescaled(Scale scale) const;

  FixedDec abs() const { return FixedDec(mpz_class(::abs(units_)), scale_); }
  FixedDec operator-() const { return FixedDec(-units_, scale_); }

  /// Plain decimal rendering with exactly scale() fractional digits.
  std::string str() const;

  friend FixedDec operator+(const FixedDec& a, const FixedDec& b);
  friend FixedDec operator-(const FixedDec& a, const FixedDec& b);
  friend FixedDec operator*(const FixedDec& a, const FixedDec& b);

  friend bool operator==(const FixedDec& a, const FixedDec& b);
  friend std::strong_ordering operator<=>(const FixedDec& a, const FixedDec& b);

 private:
  mpz_class units_{0};
  Scale scale_ = 0;
};

/// Rounds to exactly `scale` fractional digits. If `scale` exceeds the
/// current scale the value is rescaled exactly.
FixedDec roundToScale(const FixedDec& a, Scale scale, Rounding mode);

/// a / b rounded to `scale` digits. Throws std::domain_error if b == 0.
FixedDec divRound(const FixedDec& a, const FixedDec& b, Scale scale, Rounding mode);

/// 10^-k.
FixedDec unitInLastPlace(Scale k);

const FixedDec& min(const FixedDec& a, const FixedDec& b);
const FixedDec& max(const FixedDec& a, const FixedDec& b);

class DecInterval {
 public:
  DecInterval() = default;
  explicit DecInterval(FixedDec point);
  /// Throws std::invalid_argument unless lo <= hi.
  DecInterval(FixedDec lo, FixedDec hi);

  const FixedDec& lo() const { return lo_; }
  const FixedDec& hi() const { return hi_; }

  bool isPoint() const { return lo_ == hi_; }
  bool contains(const FixedDec& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const DecInterval& x) const { return lo_ <= x.lo_ && x.hi_ <= hi_; }
  bool containsZero() const { return lo_.signum() <= 0 && hi_.signum() >= 0; }

  /// max |x| over the interval.
  FixedDec magnitude() const;
  /// min |x| over the interval (0 when it straddles zero).
  FixedDec mignitude() const;
  /// Exact midpoint (one more digit of scale when needed).
  FixedDec midpoint() const;

  DecInterval operator-() const { return DecInterval(-hi_, -lo_); }

  friend bool operator==(const DecInterval& a, const DecInterval& b) = default;

 private:
  FixedDec lo_;
  FixedDec hi_;
};

/// Exact hi - lo.
FixedDec width(const DecInterval& x);

/// Smallest interval at `scale` containing x.
DecInterval roundOutward(const DecInterval& x, Scale scale);
DecInterval hull(const DecInterval& a, const DecInterval& b);

DecInterval iAdd(const DecInterval& x, const DecInterval& y, Scale workScale);
DecInterval iSub(const DecInterval& x, const DecInterval& y, Scale workScale);
DecInterval iMul(const DecInterval& x, const DecInterval& y, Scale workScale);
DecInterval iMul(const DecInterval& x, const FixedDec& y, Scale workScale);
/// Throws std::domain_error if y contains zero.
DecInterval iDivScalar(const DecInterval& x, const DecInterval& y, Scale workScale);
DecInterval iDivScalar(const DecInterval& x, const FixedDec& y, Scale workScale);
DecInterval iPowInt(const DecInterval& x, unsigned exponent, Scale workScale);

}  // namespace feigencert
