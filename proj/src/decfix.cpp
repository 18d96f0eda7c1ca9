#include "feigencert/decfix.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace feigencert {

const mpz_class& powerOfTen(Scale k) {
  static std::mutex mutex;
  static std::deque<mpz_class> table{mpz_class(1)};
  std::lock_guard lock(mutex);
  while (table.size() <= k) {
    table.push_back(table.back() * 10);
  }
  return table[k];
}

FixedDec::FixedDec(mpz_class units, Scale scale) : units_(std::move(units)), scale_(scale) {}

FixedDec::FixedDec(long value) : units_(value), scale_(0) {}

FixedDec FixedDec::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  Scale scale = 0;
  bool seenPoint = false;
  bool seenDigit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seenPoint) {
        throw std::invalid_argument("FixedDec: more than one decimal point in '" +
                                    std::string(text) + "'");
      }
      seenPoint = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seenDigit = true;
      if (seenPoint) ++scale;
    } else {
      throw std::invalid_argument("FixedDec: unexpected character in '" + std::string(text) + "'");
    }
  }
  if (!seenDigit) {
    throw std::invalid_argument("FixedDec: no digits in '" + std::string(text) + "'");
  }
  mpz_class units(digits, 10);
  if (negative) units = -units;
  return FixedDec(std::move(units), scale);
}

FixedDec FixedDec::rescaled(Scale scale) const {
  if (scale < scale_) {
    throw std::invalid_argument("FixedDec::rescaled: cannot shrink scale without rounding");
  }
  if (scale == scale_) return *this;
  return FixedDec(units_ * powerOfTen(scale - scale_), scale);
}

std::string FixedDec::str() const {
  std::string digits = mpz_class(::abs(units_)).get_str(10);
  if (digits.size() <= scale_) {
    digits.insert(0, scale_ + 1 - digits.size(), '0');
  }
  std::string out;
  if (units_ < 0) out.push_back('-');
  out.append(digits, 0, digits.size() - scale_);
  if (scale_ > 0) {
    out.push_back('.');
    out.append(digits, digits.size() - scale_, scale_);
  }
  return out;
}

namespace {

// Both operands' units expressed at the common (larger) scale.
std::pair<mpz_class, mpz_class> aligned(const FixedDec& a, const FixedDec& b, Scale& scale) {
  scale = std::max(a.scale(), b.scale());
  return {a.scale() == scale ? a.units() : a.units() * powerOfTen(scale - a.scale()),
          b.scale() == scale ? b.units() : b.units() * powerOfTen(scale - b.scale())};
}

// units / 10^digits with the given rounding.
mpz_class shiftDown(const mpz_class& units, Scale digits, Rounding mode) {
  if (digits == 0) return units;
  const mpz_class& divisor = powerOfTen(digits);
  mpz_class q;
  switch (mode) {
    case Rounding::Down:
      mpz_fdiv_q(q.get_mpz_t(), units.get_mpz_t(), divisor.get_mpz_t());
      break;
    case Rounding::Up:
      mpz_cdiv_q(q.get_mpz_t(), units.get_mpz_t(), divisor.get_mpz_t());
      break;
    case Rounding::Nearest: {
      mpz_class r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), units.get_mpz_t(), divisor.get_mpz_t());
      // |r| >= divisor/2  <=>  2|r| >= divisor; ties go away from zero.
      mpz_class twice = ::abs(r) * 2;
      if (twice >= divisor) q += sgn(units);
      break;
    }
  }
  return q;
}

}  // namespace

FixedDec operator+(const FixedDec& a, const FixedDec& b) {
  if (a.scale_ == b.scale_) return FixedDec(a.units_ + b.units_, a.scale_);
  Scale scale = 0;
  auto [x, y] = aligned(a, b, scale);
  return FixedDec(x + y, scale);
}

FixedDec operator-(const FixedDec& a, const FixedDec& b) {
  if (a.scale_ == b.scale_) return FixedDec(a.units_ - b.units_, a.scale_);
  Scale scale = 0;
  auto [x, y] = aligned(a, b, scale);
  return FixedDec(x - y, scale);
}

FixedDec operator*(const FixedDec& a, const FixedDec& b) {
  return FixedDec(a.units_ * b.units_, a.scale_ + b.scale_);
}

bool operator==(const FixedDec& a, const FixedDec& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const FixedDec& a, const FixedDec& b) {
  int c = 0;
  if (a.scale_ == b.scale_) {
    c = cmp(a.units_, b.units_);
  } else {
    Scale scale = 0;
    auto [x, y] = aligned(a, b, scale);
    c = cmp(x, y);
  }
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

FixedDec roundToScale(const FixedDec& a, Scale scale, Rounding mode) {
  if (scale >= a.scale()) return a.rescaled(scale);
  return FixedDec(shiftDown(a.units(), a.scale() - scale, mode), scale);
}

FixedDec divRound(const FixedDec& a, const FixedDec& b, Scale scale, Rounding mode) {
  if (b.isZero()) throw std::domain_error("divRound: division by zero");
  // a/b = (ua / ub) * 10^(sb - sa); result units = ua * 10^(scale + sb - sa) / ub.
  mpz_class num = a.units();
  mpz_class den = b.units();
  const long shift = static_cast<long>(scale) + static_cast<long>(b.scale()) -
                     static_cast<long>(a.scale());
  if (shift >= 0) {
    num *= powerOfTen(static_cast<Scale>(shift));
  } else {
    den *= powerOfTen(static_cast<Scale>(-shift));
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpz_class q;
  switch (mode) {
    case Rounding::Down:
      mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      break;
    case Rounding::Up:
      mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      break;
    case Rounding::Nearest: {
      mpz_class r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      mpz_class twice = ::abs(r) * 2;
      if (twice >= den) q += sgn(num);
      break;
    }
  }
  return FixedDec(std::move(q), scale);
}

FixedDec unitInLastPlace(Scale k) { return FixedDec(mpz_class(1), k); }

const FixedDec& min(const FixedDec& a, const FixedDec& b) { return b < a ? b : a; }
const FixedDec& max(const FixedDec& a, const FixedDec& b) { return a < b ? b : a; }

DecInterval::DecInterval(FixedDec point) : lo_(point), hi_(std::move(point)) {}

DecInterval::DecInterval(FixedDec lo, FixedDec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) {
    throw std::invalid_argument("DecInterval: lower endpoint " + lo_.str() +
                                " exceeds upper endpoint " + hi_.str());
  }
}

FixedDec DecInterval::magnitude() const { return max(lo_.abs(), hi_.abs()); }

FixedDec DecInterval::mignitude() const {
  if (containsZero()) return FixedDec(mpz_class(0), lo_.scale());
  return min(lo_.abs(), hi_.abs());
}

FixedDec DecInterval::midpoint() const {
  const FixedDec sum = lo_ + hi_;
  if (sum.units() % 2 == 0) return FixedDec(sum.units() / 2, sum.scale());
  return FixedDec(sum.units() * 5, sum.scale() + 1);
}

FixedDec width(const DecInterval& x) { return x.hi() - x.lo(); }

DecInterval roundOutward(const DecInterval& x, Scale scale) {
  return DecInterval(roundToScale(x.lo(), scale, Rounding::Down),
                     roundToScale(x.hi(), scale, Rounding::Up));
}

DecInterval hull(const DecInterval& a, const DecInterval& b) {
  return DecInterval(min(a.lo(), b.lo()), max(a.hi(), b.hi()));
}

DecInterval iAdd(const DecInterval& x, const DecInterval& y, Scale workScale) {
  return roundOutward(DecInterval(x.lo() + y.lo(), x.hi() + y.hi()), workScale);
}

DecInterval iSub(const DecInterval& x, const DecInterval& y, Scale workScale) {
  return roundOutward(DecInterval(x.lo() - y.hi(), x.hi() - y.lo()), workScale);
}

DecInterval iMul(const DecInterval& x, const DecInterval& y, Scale workScale) {
  const FixedDec p1 = x.lo() * y.lo();
  const FixedDec p2 = x.lo() * y.hi();
  const FixedDec p3 = x.hi() * y.lo();
  const FixedDec p4 = x.hi() * y.hi();
  return roundOutward(DecInterval(min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))),
                      workScale);
}

DecInterval iMul(const DecInterval& x, const FixedDec& y, Scale workScale) {
  FixedDec a = x.lo() * y;
  FixedDec b = x.hi() * y;
  if (y.signum() < 0) std::swap(a, b);
  return roundOutward(DecInterval(std::move(a), std::move(b)), workScale);
}

DecInterval iDivScalar(const DecInterval& x, const DecInterval& y, Scale workScale) {
  if (y.containsZero()) {
    throw std::domain_error("iDivScalar: divisor interval [" + y.lo().str() + ", " +
                            y.hi().str() + "] contains zero");
  }
  FixedDec lo;
  FixedDec hi;
  bool first = true;
  for (const FixedDec* a : {&x.lo(), &x.hi()}) {
    for (const FixedDec* b : {&y.lo(), &y.hi()}) {
      FixedDec down = divRound(*a, *b, workScale, Rounding::Down);
      FixedDec up = divRound(*a, *b, workScale, Rounding::Up);
      if (first || down < lo) lo = std::move(down);
      if (first || hi < up) hi = std::move(up);
      first = false;
    }
  }
  return DecInterval(std::move(lo), std::move(hi));
}

DecInterval iDivScalar(const DecInterval& x, const FixedDec& y, Scale workScale) {
  return iDivScalar(x, DecInterval(y), workScale);
}

DecInterval iPowInt(const DecInterval& x, unsigned exponent, Scale workScale) {
  if (exponent == 0) return DecInterval(FixedDec(1).rescaled(workScale));
  auto power = [exponent](const FixedDec& v) {
    mpz_class units;
    mpz_pow_ui(units.get_mpz_t(), v.units().get_mpz_t(), exponent);
    return FixedDec(std::move(units), v.scale() * exponent);
  };
  FixedDec a = power(x.lo());
  FixedDec b = power(x.hi());
  if (exponent % 2 == 1) {
    return roundOutward(DecInterval(std::move(a), std::move(b)), workScale);
  }
  // Even power: |x| is what matters.
  if (x.containsZero()) {
    return roundOutward(DecInterval(FixedDec(mpz_class(0), a.scale()), max(a, b)), workScale);
  }
  if (b < a) std::swap(a, b);
  return roundOutward(DecInterval(std::move(a), std::move(b)), workScale);
}

}  // namespace feigencert
