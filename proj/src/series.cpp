#include "feigencert/series.hpp"

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace feigencert {

namespace {

// Below this many nonzero coefficients in either factor, schoolbook products
// beat packing.
constexpr std::size_t kKroneckerThreshold = 12;
// Affine compositions of at most this many terms use plain Horner.
constexpr std::size_t kAffineLeaf = 16;

// Midpoint-radius view of a coefficient vector: entry j lies in
// mid[j] +- rad[j] (units at `scale`, rad >= 0). A product needs one
// full-width multiplication per term; the radius terms only involve the
// short rad.
struct Balls {
  Scale scale = 0;
  std::vector<mpz_class> mid;
  std::vector<mpz_class> rad;
  std::vector<mpz_class> absMid;
  std::vector<mpz_class> absMidPlusRad;
  std::vector<std::size_t> nonzero;

  std::size_t size() const { return mid.size(); }
};

// Fills absMid, absMidPlusRad and nonzero from mid and rad.
void finish(Balls& b) {
  const std::size_t n = b.mid.size();
  b.absMid.resize(n);
  b.absMidPlusRad.resize(n);
  b.nonzero.clear();
  for (std::size_t j = 0; j < n; ++j) {
    mpz_abs(b.absMid[j].get_mpz_t(), b.mid[j].get_mpz_t());
    mpz_add(b.absMidPlusRad[j].get_mpz_t(), b.absMid[j].get_mpz_t(), b.rad[j].get_mpz_t());
    if (mpz_sgn(b.absMidPlusRad[j].get_mpz_t()) != 0) b.nonzero.push_back(j);
  }
}

Balls toBalls(std::span<const DecInterval> coeffs, Scale scale) {
  Balls b;
  b.scale = scale;
  const std::size_t n = coeffs.size();
  b.mid.resize(n);
  b.rad.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const DecInterval* c = &coeffs[j];
    DecInterval rounded;
    if (c->lo().scale() != scale || c->hi().scale() != scale) {
      rounded = roundOutward(*c, scale);
      c = &rounded;
    }
    mpz_ptr mid = b.mid[j].get_mpz_t();
    mpz_add(mid, c->lo().units().get_mpz_t(), c->hi().units().get_mpz_t());
    mpz_fdiv_q_2exp(mid, mid, 1);
    mpz_sub(b.rad[j].get_mpz_t(), c->hi().units().get_mpz_t(), mid);
  }
  finish(b);
  return b;
}

std::vector<DecInterval> toIntervals(const Balls& b) {
  std::vector<DecInterval> out;
  out.reserve(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    out.emplace_back(FixedDec(b.mid[j] - b.rad[j], b.scale), FixedDec(b.mid[j] + b.rad[j], b.scale));
  }
  return out;
}

// Adds x_i * y_k into mid +- rad: |XY - M M'| <= |M| R' + R (|M'| + R').
inline void accumulateProduct(mpz_class& mid, mpz_class& rad, const Balls& x, std::size_t i,
                              const Balls& y, std::size_t k) {
  mpz_addmul(mid.get_mpz_t(), x.mid[i].get_mpz_t(), y.mid[k].get_mpz_t());
  if (mpz_sgn(y.rad[k].get_mpz_t()) != 0) {
    mpz_addmul(rad.get_mpz_t(), x.absMid[i].get_mpz_t(), y.rad[k].get_mpz_t());
  }
  if (mpz_sgn(x.rad[i].get_mpz_t()) != 0) {
    mpz_addmul(rad.get_mpz_t(), x.rad[i].get_mpz_t(), y.absMidPlusRad[k].get_mpz_t());
  }
}

// Brings mid +- rad from `fromScale` to `toScale` in place: the midpoint is
// rounded to nearest and the radius grows to cover that rounding.
void reduceBall(mpz_class& mid, mpz_class& rad, Scale fromScale, Scale toScale) {
  if (fromScale <= toScale) {
    if (fromScale < toScale) {
      mid *= powerOfTen(toScale - fromScale);
      rad *= powerOfTen(toScale - fromScale);
    }
    return;
  }
  const mpz_class& d = powerOfTen(fromScale - toScale);
  mpz_class r;
  mpz_tdiv_qr(mid.get_mpz_t(), r.get_mpz_t(), mid.get_mpz_t(), d.get_mpz_t());
  const bool inexact = r != 0;
  if (inexact) {
    r *= 2;
    if (mpz_cmpabs(r.get_mpz_t(), d.get_mpz_t()) >= 0) mid += mpz_sgn(r.get_mpz_t());
  }
  mpz_cdiv_q(rad.get_mpz_t(), rad.get_mpz_t(), d.get_mpz_t());
  if (inexact) rad += 1;
}

void reduceAll(Balls& b, Scale toScale) {
  for (std::size_t j = 0; j < b.size(); ++j) reduceBall(b.mid[j], b.rad[j], b.scale, toScale);
  b.scale = toScale;
  finish(b);
}

// Kronecker substitution: integer coefficients c_j become the single
// integer sum c_j 2^(64 L j), so a Cauchy product is one big multiplication.
mpz_class packSlots(const std::vector<mpz_class>& c, std::size_t slotLimbs) {
  const std::size_t n = c.size() * slotLimbs;
  mpz_class pos, neg;
  mp_ptr pp = mpz_limbs_write(pos.get_mpz_t(), static_cast<mp_size_t>(n));
  mp_ptr np = mpz_limbs_write(neg.get_mpz_t(), static_cast<mp_size_t>(n));
  std::fill(pp, pp + n, mp_limb_t(0));
  std::fill(np, np + n, mp_limb_t(0));
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int sign = mpz_sgn(c[j].get_mpz_t());
    if (sign == 0) continue;
    const mp_limb_t* src = mpz_limbs_read(c[j].get_mpz_t());
    std::copy(src, src + mpz_size(c[j].get_mpz_t()), (sign > 0 ? pp : np) + j * slotLimbs);
  }
  mpz_limbs_finish(pos.get_mpz_t(), static_cast<mp_size_t>(n));
  mpz_limbs_finish(neg.get_mpz_t(), static_cast<mp_size_t>(n));
  return pos - neg;
}

// Lowest `count` slots of y as balanced digits in [-2^(b-1), 2^(b-1)),
// b = 64 L. Exact as long as every coefficient fits that range.
std::vector<mpz_class> unpackSlots(const mpz_class& y, std::size_t count, std::size_t slotLimbs) {
  const int sign = mpz_sgn(y.get_mpz_t());
  const std::size_t size = mpz_size(y.get_mpz_t());
  const mp_limb_t* limbs = mpz_limbs_read(y.get_mpz_t());
  mpz_class half, full;
  mpz_setbit(half.get_mpz_t(), 64 * slotLimbs - 1);
  mpz_setbit(full.get_mpz_t(), 64 * slotLimbs);

  std::vector<mpz_class> out(count);
  bool carry = false;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t offset = j * slotLimbs;
    const std::size_t len = offset >= size ? 0 : std::min(slotLimbs, size - offset);
    mpz_t raw;
    mpz_class& d = out[j];
    d = mpz_class(mpz_roinit_n(raw, limbs + offset, static_cast<mp_size_t>(len)));
    if (carry) d += 1;
    carry = d >= half;
    if (carry) d -= full;
    if (sign < 0) d = -d;
  }
  return out;
}

std::size_t maxBits(const std::vector<mpz_class>& v) {
  std::size_t bits = 0;
  for (const mpz_class& x : v) {
    if (x != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  }
  return bits;
}

// Exact midpoint product via one big multiplication. The radius uses prefix
// bounds: sum_{i+k=j} |M_i| R'_k <= max_{k<=j} R'_k * sum_{i<=j} |M_i|, and
// likewise for the R (|M'| + R') part.
void kroneckerProduct(const Balls& a, const Balls& b, std::vector<mpz_class>& mid,
                      std::vector<mpz_class>& rad) {
  const std::size_t count = mid.size();
  std::size_t logTerms = 0;
  while ((std::size_t(1) << logTerms) < std::min(a.size(), b.size())) ++logTerms;
  const std::size_t bits = maxBits(a.mid) + maxBits(b.mid) + logTerms + 2;
  const std::size_t slotLimbs = (bits + 63) / 64;
  const mpz_class product = packSlots(a.mid, slotLimbs) * packSlots(b.mid, slotLimbs);
  mid = unpackSlots(product, count, slotLimbs);

  mpz_class sumA(0), sumB(0), maxRa(0), maxRb(0);
  for (std::size_t j = 0; j < count; ++j) {
    if (j < a.size()) {
      sumA += a.absMid[j];
      if (maxRa < a.rad[j]) maxRa = a.rad[j];
    }
    if (j < b.size()) {
      sumB += b.absMidPlusRad[j];
      if (maxRb < b.rad[j]) maxRb = b.rad[j];
    }
    rad[j] = maxRb * sumA + maxRa * sumB;
  }
}

// First `count` coefficients of a*b, rounded to `toScale`.
Balls multiply(const Balls& a, const Balls& b, std::size_t count, Scale toScale) {
  Balls out;
  out.scale = a.scale + b.scale;
  out.mid.resize(count);
  out.rad.resize(count);
  if (std::min(a.nonzero.size(), b.nonzero.size()) >= kKroneckerThreshold) {
    kroneckerProduct(a, b, out.mid, out.rad);
  } else {
    for (std::size_t i : a.nonzero) {
      for (std::size_t k : b.nonzero) {
        if (i + k >= count) break;
        accumulateProduct(out.mid[i + k], out.rad[i + k], a, i, b, k);
      }
    }
  }
  reduceAll(out, toScale);
  return out;
}

// a + b over max(len) coefficients; both at one scale.
Balls addBalls(const Balls& a, const Balls& b) {
  Balls out;
  out.scale = a.scale;
  const std::size_t n = std::max(a.size(), b.size());
  out.mid.resize(n);
  out.rad.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j < a.size()) {
      out.mid[j] += a.mid[j];
      out.rad[j] += a.rad[j];
    }
    if (j < b.size()) {
      out.mid[j] += b.mid[j];
      out.rad[j] += b.rad[j];
    }
  }
  finish(out);
  return out;
}

mpz_class magnitudeUnits(const DecInterval& x) {
  mpz_class a = mpz_class(abs(x.lo().units()));
  mpz_class b = mpz_class(abs(x.hi().units()));
  return a < b ? b : a;
}

void requireSameOrder(const TruncSeries& a, const TruncSeries& b, const char* what) {
  if (a.order() != b.order()) {
    throw std::invalid_argument(std::string(what) + ": order mismatch (" +
                                std::to_string(a.order()) + " vs " + std::to_string(b.order()) +
                                ")");
  }
}

std::optional<FixedDec> addTails(const std::optional<FixedDec>& a,
                                 const std::optional<FixedDec>& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

// Tail of the product of two tracked series: the part of (kept a)(kept b)
// above order K plus every product involving a tail.
std::optional<FixedDec> productTail(const TruncSeries& a, const TruncSeries& b, Scale workScale) {
  if (!a.tracksTail() || !b.tracksTail()) return std::nullopt;
  const std::size_t order = a.order();
  std::vector<mpz_class> suffix(order + 2, mpz_class(0));
  for (std::size_t k = order + 1; k-- > 0;) {
    suffix[k] = suffix[k + 1] + magnitudeUnits(b[k]);
  }
  mpz_class high(0);
  mpz_class normA(0);
  for (std::size_t i = 0; i <= order; ++i) {
    const mpz_class m = magnitudeUnits(a[i]);
    normA += m;
    if (i >= 1) high += m * suffix[order + 1 - i];
  }
  const FixedDec kept_a(normA, a.scale());
  const FixedDec kept_b(suffix[0], b.scale());
  const FixedDec total = FixedDec(high, a.scale() + b.scale()) + *a.tail() * (kept_b + *b.tail()) +
                         kept_a * *b.tail();
  return roundToScale(total, workScale, Rounding::Up);
}

// l1 bound on p(x_exact) minus the kept coefficients of p(x_kept), for x
// affine with kept norm at most N and tail t:
//   sum_i |p_i| ((N + t)^i - N^i)  +  sum_{i > K} |p_i| N^i,
// the second sum covering x_kept^i spilling past order K.
FixedDec affineCompositionTail(std::span<const DecInterval> p, const FixedDec& norm,
                               const FixedDec& tail, std::size_t order, Scale workScale) {
  const FixedDec wide = norm + tail;
  FixedDec wideUp(1), normDown(1), normUp(1), total;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const FixedDec coeff = p[i].magnitude();
    FixedDec term = coeff * (wideUp - normDown);
    if (i > order) term = term + coeff * normUp;
    total = total + roundToScale(term, workScale, Rounding::Up);
    wideUp = roundToScale(wideUp * wide, workScale, Rounding::Up);
    normDown = roundToScale(normDown * norm, workScale, Rounding::Down);
    normUp = roundToScale(normUp * norm, workScale, Rounding::Up);
  }
  return total;
}

// Horner's rule for x = x0 + x1 w on p[first..last), in place; the result
// has degree last - first - 1, truncated to `count` coefficients.
Balls hornerAffineLeaf(const Balls& p, std::size_t first, std::size_t last, const Balls& x,
                       std::size_t count) {
  const bool hasLinear = x.size() > 1;
  const Scale workScale = p.scale;
  Balls r;
  r.scale = workScale;
  r.mid.assign(std::min(last - first, count), mpz_class(0));
  r.rad.assign(r.mid.size(), mpz_class(0));
  r.mid[0] = p.mid[last - 1];
  r.rad[0] = p.rad[last - 1];
  std::size_t degree = 0;
  mpz_class m, rr, absPlus;
  for (std::size_t i = last - 1; i-- > first;) {
    const std::size_t top = hasLinear ? std::min(r.mid.size() - 1, degree + 1) : degree;
    for (std::size_t j = top + 1; j-- > 0;) {
      m = 0;
      rr = 0;
      if (j <= degree) {
        mpz_abs(absPlus.get_mpz_t(), r.mid[j].get_mpz_t());
        absPlus += r.rad[j];
        mpz_addmul(m.get_mpz_t(), x.mid[0].get_mpz_t(), r.mid[j].get_mpz_t());
        mpz_addmul(rr.get_mpz_t(), x.absMid[0].get_mpz_t(), r.rad[j].get_mpz_t());
        mpz_addmul(rr.get_mpz_t(), x.rad[0].get_mpz_t(), absPlus.get_mpz_t());
      }
      if (hasLinear && j >= 1) {
        mpz_abs(absPlus.get_mpz_t(), r.mid[j - 1].get_mpz_t());
        absPlus += r.rad[j - 1];
        mpz_addmul(m.get_mpz_t(), x.mid[1].get_mpz_t(), r.mid[j - 1].get_mpz_t());
        mpz_addmul(rr.get_mpz_t(), x.absMid[1].get_mpz_t(), r.rad[j - 1].get_mpz_t());
        mpz_addmul(rr.get_mpz_t(), x.rad[1].get_mpz_t(), absPlus.get_mpz_t());
      }
      reduceBall(m, rr, workScale + x.scale, workScale);
      mpz_swap(r.mid[j].get_mpz_t(), m.get_mpz_t());
      mpz_swap(r.rad[j].get_mpz_t(), rr.get_mpz_t());
    }
    degree = top;
    r.mid[0] += p.mid[i];
    r.rad[0] += p.rad[i];
  }
  finish(r);
  return r;
}

// Divide and conquer for an affine argument: p_lo(x) + x^h p_hi(x). Each
// piece has degree below its length, so the products shrink with the pieces.
class AffineComposer {
 public:
  AffineComposer(const Balls& p, const Balls& x, std::size_t count)
      : p_(p), x_(x), count_(count) {}

  Balls eval(std::size_t first, std::size_t last) {
    const std::size_t len = last - first;
    if (len <= kAffineLeaf) return hornerAffineLeaf(p_, first, last, x_, count_);
    std::size_t h = 1;
    while (2 * h < len) h *= 2;
    const Balls low = eval(first, first + h);
    const Balls high = eval(first + h, last);
    return addBalls(low, multiply(power(h), high, std::min(len, count_), p_.scale));
  }

 private:
  // x^h for h a power of two, by repeated squaring.
  const Balls& power(std::size_t h) {
    auto it = powers_.find(h);
    if (it != powers_.end()) return it->second;
    const std::size_t len = std::min(h + 1, count_);
    Balls value;
    if (h == 1) {
      value = x_;
      reduceAll(value, p_.scale);
    } else {
      const Balls& half = power(h / 2);
      value = multiply(half, half, len, p_.scale);
    }
    return powers_.emplace(h, std::move(value)).first->second;
  }

  const Balls& p_;
  const Balls& x_;
  std::size_t count_;
  std::map<std::size_t, Balls> powers_;
};

}  // namespace

TruncSeries::TruncSeries(std::size_t order, Scale scale, bool trackTail)
    : coeffs_(order + 1, DecInterval(FixedDec(mpz_class(0), scale))),
      scale_(scale),
      tail_(trackTail ? std::optional<FixedDec>(FixedDec()) : std::nullopt) {}

TruncSeries::TruncSeries(std::vector<DecInterval> coeffs, Scale scale, std::optional<FixedDec> tail)
    : coeffs_(std::move(coeffs)), scale_(scale), tail_(std::move(tail)) {
  if (coeffs_.empty()) throw std::invalid_argument("TruncSeries: needs at least one coefficient");
  if (tail_ && tail_->signum() < 0) throw std::invalid_argument("TruncSeries: negative tail bound");
  for (DecInterval& c : coeffs_) {
    if (c.lo().scale() != scale_ || c.hi().scale() != scale_) c = roundOutward(c, scale_);
  }
}

TruncSeries TruncSeries::fromPolynomial(std::span<const FixedDec> poly, std::size_t order,
                                        Scale scale, bool trackTail) {
  std::vector<DecInterval> coeffs;
  coeffs.reserve(order + 1);
  FixedDec dropped;
  for (std::size_t j = 0; j <= order; ++j) {
    coeffs.emplace_back(j < poly.size() ? poly[j] : FixedDec());
  }
  for (std::size_t j = order + 1; j < poly.size(); ++j) dropped = dropped + poly[j].abs();
  std::optional<FixedDec> tail;
  if (trackTail) tail = roundToScale(dropped, scale, Rounding::Up);
  return TruncSeries(std::move(coeffs), scale, std::move(tail));
}

TruncSeries TruncSeries::constant(const DecInterval& c, std::size_t order, Scale scale,
                                  bool trackTail) {
  TruncSeries out(order, scale, trackTail);
  out.coeffs_[0] = roundOutward(c, scale);
  return out;
}

FixedDec TruncSeries::keptNormUpper() const {
  mpz_class total(0);
  for (const DecInterval& c : coeffs_) total += magnitudeUnits(c);
  return FixedDec(std::move(total), scale_);
}

bool TruncSeries::isAffine() const {
  for (std::size_t j = 2; j < coeffs_.size(); ++j) {
    if (!coeffs_[j].lo().isZero() || !coeffs_[j].hi().isZero()) return false;
  }
  return true;
}

TruncSeries sAdd(const TruncSeries& a, const TruncSeries& b) {
  requireSameOrder(a, b, "sAdd");
  const Scale scale = std::max(a.scale(), b.scale());
  std::vector<DecInterval> out;
  out.reserve(a.order() + 1);
  for (std::size_t j = 0; j <= a.order(); ++j) {
    out.emplace_back(a[j].lo() + b[j].lo(), a[j].hi() + b[j].hi());
  }
  return TruncSeries(std::move(out), scale, addTails(a.tail(), b.tail()));
}

TruncSeries sSub(const TruncSeries& a, const TruncSeries& b) {
  requireSameOrder(a, b, "sSub");
  const Scale scale = std::max(a.scale(), b.scale());
  std::vector<DecInterval> out;
  out.reserve(a.order() + 1);
  for (std::size_t j = 0; j <= a.order(); ++j) {
    out.emplace_back(a[j].lo() - b[j].hi(), a[j].hi() - b[j].lo());
  }
  return TruncSeries(std::move(out), scale, addTails(a.tail(), b.tail()));
}

TruncSeries sAddConstant(const TruncSeries& a, const DecInterval& c) {
  const Scale scale = std::max({a.scale(), c.lo().scale(), c.hi().scale()});
  std::vector<DecInterval> out(a.coeffs().begin(), a.coeffs().end());
  out[0] = DecInterval(out[0].lo() + c.lo(), out[0].hi() + c.hi());
  return TruncSeries(std::move(out), scale, a.tail());
}

TruncSeries sScale(const TruncSeries& a, const DecInterval& s) {
  std::vector<DecInterval> out;
  out.reserve(a.order() + 1);
  for (const DecInterval& c : a.coeffs()) out.push_back(iMul(c, s, a.scale()));
  std::optional<FixedDec> tail;
  if (a.tracksTail()) tail = roundToScale(*a.tail() * s.magnitude(), a.scale(), Rounding::Up);
  return TruncSeries(std::move(out), a.scale(), std::move(tail));
}

TruncSeries sScale(const TruncSeries& a, const FixedDec& s) { return sScale(a, DecInterval(s)); }

TruncSeries sMul(const TruncSeries& a, const TruncSeries& b, Scale workScale) {
  requireSameOrder(a, b, "sMul");
  const Balls product = multiply(toBalls(a.coeffs(), a.scale()), toBalls(b.coeffs(), b.scale()),
                                 a.order() + 1, workScale);
  return TruncSeries(toIntervals(product), workScale, productTail(a, b, workScale));
}

namespace {

// sum_t p_t * xs[t], accumulated exactly and rounded once per coefficient.
// Every xs[t] shares one order and scale.
TruncSeries linearCombination(std::span<const DecInterval> p, std::span<const TruncSeries> xs,
                              std::span<const Balls> xBalls, Scale workScale) {
  const std::size_t order = xs.front().order();
  const Scale seriesScale = xs.front().scale();
  Scale pScale = 0;
  for (const DecInterval& c : p) pScale = std::max({pScale, c.lo().scale(), c.hi().scale()});
  const Balls scalars = toBalls(p, pScale);

  Balls sum;
  sum.scale = pScale + seriesScale;
  sum.mid.resize(order + 1);
  sum.rad.resize(order + 1);
  bool tracked = true;
  FixedDec tail;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (xs[t].tracksTail()) {
      tail = tail + *xs[t].tail() * FixedDec(scalars.absMidPlusRad[t], pScale);
    } else {
      tracked = false;
    }
    if (mpz_sgn(scalars.absMidPlusRad[t].get_mpz_t()) == 0) continue;
    for (std::size_t j : xBalls[t].nonzero) {
      accumulateProduct(sum.mid[j], sum.rad[j], scalars, t, xBalls[t], j);
    }
  }
  reduceAll(sum, workScale);
  std::optional<FixedDec> outTail;
  if (tracked) outTail = roundToScale(tail, workScale, Rounding::Up);
  return TruncSeries(toIntervals(sum), workScale, std::move(outTail));
}

TruncSeries composeAffine(std::span<const DecInterval> p, const TruncSeries& x, Scale workScale) {
  const std::size_t count = x.order() + 1;
  const Balls bp = toBalls(p, workScale);
  const Balls bx = toBalls(x.coeffs().first(std::min<std::size_t>(2, count)), x.scale());
  AffineComposer composer(bp, bx, count);
  Balls value = composer.eval(0, p.size());
  value.mid.resize(count);
  value.rad.resize(count);
  std::optional<FixedDec> tail;
  if (x.tracksTail()) {
    tail = affineCompositionTail(p, roundToScale(x.keptNormUpper(), workScale, Rounding::Up),
                                 *x.tail(), x.order(), workScale);
  }
  return TruncSeries(toIntervals(value), workScale, std::move(tail));
}

}  // namespace

TruncSeries sPolyEvalHorner(std::span<const DecInterval> p, const TruncSeries& x,
                            Scale workScale) {
  const bool track = x.tracksTail();
  if (p.empty()) return TruncSeries(x.order(), workScale, track);
  TruncSeries r = TruncSeries::constant(p.back(), x.order(), workScale, track);
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    r = sAddConstant(sMul(r, x, workScale), p[i]);
  }
  return r;
}

TruncSeries sPolyEvalBabyGiant(std::span<const DecInterval> p, const TruncSeries& x,
                               Scale workScale) {
  const std::size_t terms = p.size();
  if (terms == 0) return TruncSeries(x.order(), workScale, x.tracksTail());
  if (x.isAffine()) return composeAffine(p, x, workScale);
  if (terms <= 3) return sPolyEvalHorner(p, x, workScale);

  std::size_t step = 1;
  while (step * step < terms) ++step;

  const bool track = x.tracksTail();
  std::vector<TruncSeries> powers;
  powers.reserve(step + 1);
  powers.push_back(TruncSeries::constant(DecInterval(FixedDec(1)), x.order(), workScale, track));
  powers.push_back(TruncSeries(std::vector<DecInterval>(x.coeffs().begin(), x.coeffs().end()),
                               workScale, x.tail() ? std::optional<FixedDec>(roundToScale(
                                                         *x.tail(), workScale, Rounding::Up))
                                                   : std::nullopt));
  for (std::size_t j = 2; j <= step; ++j) {
    powers.push_back(sMul(powers[j - 1], powers[1], workScale));
  }
  std::vector<Balls> balls;
  balls.reserve(step);
  for (std::size_t j = 0; j < step; ++j) balls.push_back(toBalls(powers[j].coeffs(), workScale));

  auto block = [&](std::size_t b) {
    const std::size_t first = b * step;
    const std::size_t count = std::min(step, terms - first);
    return linearCombination(p.subspan(first, count),
                             std::span<const TruncSeries>(powers.data(), count),
                             std::span<const Balls>(balls.data(), count), workScale);
  };

  const std::size_t blocks = (terms + step - 1) / step;
  TruncSeries r = block(blocks - 1);
  for (std::size_t b = blocks - 1; b-- > 0;) {
    r = sAdd(sMul(r, powers[step], workScale), block(b));
  }
  return r;
}

TruncSeries sDivByAffine(const TruncSeries& a, const FixedDec& c0, const FixedDec& c1,
                         Scale workScale) {
  if (c0.isZero()) throw std::domain_error("sDivByAffine: constant term c0 is zero");
  std::vector<DecInterval> out;
  out.reserve(a.order() + 1);
  out.push_back(iDivScalar(a[0], c0, workScale));
  for (std::size_t j = 1; j <= a.order(); ++j) {
    const DecInterval num = iSub(a[j], iMul(out.back(), c1, workScale), workScale);
    out.push_back(iDivScalar(num, c0, workScale));
  }
  return TruncSeries(std::move(out), workScale, std::nullopt);
}

}  // namespace feigencert
