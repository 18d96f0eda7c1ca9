#include "feigencert/lanford.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

#include "feigencert/series.hpp"

namespace feigencert {

namespace {

constexpr std::array<std::string_view, 10> kPsi0Table = {
    "13.99535280247654509657069657886239000000000",
    "-0.37020336425570944099807863650264000000000",
    "-0.10516441308487059395306704671240000000000",
    "0.04689224531866417356902064258837500000000",
    "-0.00657196434429489515940234119726562500000",
    "-0.00092424880356949042888086870078125000000",
    "0.00060199775715465703408272872656250000000",
    "-0.00007266358160903580114416214843750000000",
    "-0.00003921160572782132082950382843017578125",
    "0.00000105783506805382222151565551757812500",
};

const FixedDec& tenth() {
  static const FixedDec value = FixedDec::parse("0.1");
  return value;
}

const FixedDec& twoFifths() {
  static const FixedDec value = FixedDec::parse("0.4");
  return value;
}

// |c - x| maximised over x in the interval.
FixedDec farthest(const DecInterval& x, const FixedDec& c) {
  return max((x.lo() - c).abs(), (x.hi() - c).abs());
}

// Distance from c to the interval (0 if contained).
FixedDec gap(const DecInterval& x, const FixedDec& c) {
  if (c < x.lo()) return x.lo() - c;
  if (x.hi() < c) return c - x.hi();
  return FixedDec();
}

}  // namespace

LanfordCoords::LanfordCoords(FixedDec u, std::vector<FixedDec> nu)
    : u_(std::move(u)), nu_(std::move(nu)) {
  Scale scale = u_.scale();
  for (const FixedDec& v : nu_) scale = std::max(scale, v.scale());
  u_ = u_.rescaled(scale);
  for (FixedDec& v : nu_) v = v.rescaled(scale);
}

FixedDec LanfordCoords::nuAt(std::size_t i) const {
  if (i == 0) throw std::out_of_range("LanfordCoords::nuAt: indices start at 1");
  if (i > nu_.size()) return FixedDec(mpz_class(0), scale());
  return nu_[i - 1];
}

std::span<const std::string_view> psi0Table() { return kPsi0Table; }

LanfordCoords psi0() {
  std::vector<FixedDec> nu;
  for (std::size_t i = 1; i < kPsi0Table.size(); ++i) nu.push_back(FixedDec::parse(kPsi0Table[i]));
  return LanfordCoords(FixedDec::parse(kPsi0Table[0]), std::move(nu));
}

const FixedDec& jScaling() {
  static const FixedDec value = FixedDec::parse("3.669");
  return value;
}

const FixedDec& wScaling() {
  static const FixedDec value = FixedDec::parse("2.5");
  return value;
}

FixedDec norm(const LanfordCoords& c) {
  FixedDec total = c.u().abs();
  for (const FixedDec& v : c.nu()) total = total + v.abs();
  return total;
}

FixedDec distance(const LanfordCoords& a, const LanfordCoords& b) {
  FixedDec total = (a.u() - b.u()).abs();
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 1; i <= n; ++i) total = total + (a.nuAt(i) - b.nuAt(i)).abs();
  return total;
}

FixedDec distanceUpper(const IntervalCoords& x, const LanfordCoords& c) {
  if (!x.tail) throw std::invalid_argument("distanceUpper: interval coordinates carry no tail bound");
  FixedDec total = farthest(x.u, c.u()) + *x.tail;
  for (std::size_t i = 1; i <= x.nu.size(); ++i) total = total + farthest(x.nu[i - 1], c.nuAt(i));
  for (std::size_t i = x.nu.size() + 1; i <= c.size(); ++i) total = total + c.nuAt(i).abs();
  return total;
}

FixedDec distanceLower(const IntervalCoords& x, const LanfordCoords& c) {
  FixedDec total = gap(x.u, c.u());
  for (std::size_t i = 1; i <= x.nu.size(); ++i) total = total + gap(x.nu[i - 1], c.nuAt(i));
  if (c.size() > x.nu.size()) {
    if (!x.tail) throw std::invalid_argument("distanceLower: interval coordinates carry no tail bound");
    FixedDec beyond;
    for (std::size_t i = x.nu.size() + 1; i <= c.size(); ++i) beyond = beyond + c.nuAt(i).abs();
    if (*x.tail < beyond) total = total + (beyond - *x.tail);
  }
  return total;
}

FixedDec distanceUpper(const IntervalCoords& x, const IntervalCoords& y) {
  if (x.nu.size() != y.nu.size()) {
    throw std::invalid_argument("distanceUpper: coordinate counts differ");
  }
  if (!x.tail || !y.tail) {
    throw std::invalid_argument("distanceUpper: interval coordinates carry no tail bound");
  }
  auto spread = [](const DecInterval& a, const DecInterval& b) {
    return max((a.hi() - b.lo()).abs(), (b.hi() - a.lo()).abs());
  };
  FixedDec total = spread(x.u, y.u) + *x.tail + *y.tail;
  for (std::size_t i = 0; i < x.nu.size(); ++i) total = total + spread(x.nu[i], y.nu[i]);
  return total;
}

IntervalCoords applyJ(const LanfordCoords& c, Scale workScale) {
  IntervalCoords out;
  out.u = iDivScalar(DecInterval(c.u()), jScaling(), workScale);
  for (const FixedDec& v : c.nu()) out.nu.emplace_back(-v);
  out.tail = FixedDec();
  return out;
}

IntervalCoords applyJ(const IntervalCoords& c, Scale workScale) {
  IntervalCoords out;
  out.u = iDivScalar(c.u, jScaling(), workScale);
  for (const DecInterval& v : c.nu) out.nu.push_back(-v);
  out.tail = c.tail;
  return out;
}

IntervalCoords applyT(const LanfordCoords& c, std::size_t order, Scale workScale, bool trackTail) {
  // lambda = psi(1) is exact: u is a finite decimal.
  const FixedDec g0 = c.u() * tenth();
  const FixedDec lambda = FixedDec(1) - g0;
  if (lambda.isZero()) throw std::domain_error("applyT: psi(1) = 0, the rescaling is undefined");
  const FixedDec lambda2 = lambda * lambda;

  std::vector<DecInterval> g;  // G(w) = u/10 + sum nu_i w^i
  g.reserve(c.size() + 1);
  g.emplace_back(g0);
  for (const FixedDec& v : c.nu()) g.emplace_back(v);
  const std::span<const DecInterval> gShifted = std::span<const DecInterval>(g).subspan(1);

  const DecInterval one(FixedDec(1));

  // psi(lambda z) = 1 - lambda^2 z^2 G(w~), with w~ affine in w.
  const std::array<FixedDec, 2> inner = {(lambda2 - FixedDec(1)) * twoFifths(), lambda2};
  const TruncSeries innerArg = TruncSeries::fromPolynomial(inner, order, workScale, trackTail);
  const TruncSeries h = sPolyEvalBabyGiant(g, innerArg, workScale);

  const std::array<FixedDec, 2> scaledZ2 = {lambda2, lambda2 * wScaling()};
  const TruncSeries lz2 = TruncSeries::fromPolynomial(scaledZ2, order, workScale, trackTail);
  const TruncSeries y = sSub(TruncSeries::constant(one, order, workScale, trackTail),
                             sMul(lz2, h, workScale));

  // psi(y) = 1 - y^2 G(W) with W = (y^2 - 1)/2.5.
  const TruncSeries y2 = sMul(y, y, workScale);
  const TruncSeries bigW = sScale(sAddConstant(y2, -one), twoFifths());

  // (1 - T psi)/z^2 without dividing by z^2 = 1 + 2.5 w:
  //   (y^2 - 1)/z^2 = -lambda^2 H (y + 1) =: Q,
  //   (1 - T psi)/z^2 = Q (G_0 + y^2 D(W)/2.5) / lambda,  D(x) = (G(x) - G_0)/x.
  const TruncSeries d = sPolyEvalBabyGiant(gShifted, bigW, workScale);
  const TruncSeries bracket = sAddConstant(sScale(sMul(y2, d, workScale), twoFifths()), DecInterval(g0));
  const TruncSeries q = sScale(sMul(h, sAddConstant(y, one), workScale), -lambda2);
  const DecInterval invLambda = iDivScalar(one, lambda, workScale);
  const TruncSeries gPrime = sScale(sMul(q, bracket, workScale), invLambda);

  IntervalCoords out;
  out.u = iMul(gPrime[0], FixedDec(10), workScale);
  out.nu.assign(gPrime.coeffs().begin() + 1, gPrime.coeffs().end());
  out.tail = gPrime.tail();
  return out;
}

IntervalCoords applyPhi(const LanfordCoords& c, std::size_t order, Scale workScale,
                        bool trackTail) {
  IntervalCoords t = applyT(c, order, workScale, trackTail);
  const DecInterval u(c.u());
  const DecInterval step = iDivScalar(iSub(t.u, u, workScale), jScaling(), workScale);
  t.u = iSub(u, step, workScale);
  return t;
}

std::vector<DecInterval> toTaylor(const LanfordCoords& c, std::size_t order, Scale workScale) {
  if (order == 0) throw std::invalid_argument("toTaylor: order must be at least 1");
  // 2.5^-i = 0.4^i is a finite decimal, so the basis change is exact.
  std::vector<FixedDec> inversePowers{FixedDec(1)};
  for (std::size_t i = 1; i <= c.size(); ++i) inversePowers.push_back(inversePowers.back() * twoFifths());

  std::vector<DecInterval> out;
  out.reserve(order);
  for (std::size_t j = 0; j < order; ++j) {
    FixedDec sum = j == 0 ? c.u() * tenth() : FixedDec();
    for (std::size_t i = std::max<std::size_t>(j, 1); i <= c.size(); ++i) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), i, j);
      if ((i - j) % 2 == 1) binom = -binom;
      sum = sum + c.nuAt(i) * inversePowers[i] * FixedDec(binom, 0);
    }
    out.push_back(roundOutward(DecInterval(-sum), workScale));
  }
  return out;
}

LanfordCoords fromTaylor(std::span<const FixedDec> a) {
  // G(w) = h(1 + 2.5 w) with h(t) = -sum_j a_{j+1} t^j.
  const std::size_t degree = a.empty() ? 0 : a.size() - 1;
  std::vector<FixedDec> g(degree + 1);
  FixedDec power(1);
  for (std::size_t i = 0; i <= degree; ++i) {
    FixedDec sum;
    for (std::size_t j = i; j < a.size(); ++j) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), j, i);
      sum = sum - a[j] * FixedDec(binom, 0);
    }
    g[i] = sum * power;
    power = power * wScaling();
  }
  FixedDec u = g[0] * FixedDec(10);
  g.erase(g.begin());
  return LanfordCoords(std::move(u), std::move(g));
}

DecInterval evalPsi(const LanfordCoords& c, const DecInterval& z, Scale workScale) {
  const DecInterval z2 = iPowInt(z, 2, workScale);
  const DecInterval w = iMul(iSub(z2, DecInterval(FixedDec(1)), workScale), twoFifths(), workScale);
  DecInterval acc;
  for (std::size_t i = c.size(); i >= 1; --i) {
    acc = iAdd(iMul(acc, w, workScale), DecInterval(c.nuAt(i)), workScale);
  }
  acc = iAdd(iMul(acc, w, workScale), DecInterval(c.u() * tenth()), workScale);
  return iSub(DecInterval(FixedDec(1)), iMul(z2, acc, workScale), workScale);
}

}  // namespace feigencert
