#include <doctest.h>

#include <random>

#include "feigencert/series.hpp"
#include "oracle.hpp"

using namespace feigencert;
using oracle::q;

namespace {

FixedDec d(const char* s) { return FixedDec::parse(s); }

TruncSeries poly(std::initializer_list<const char*> coeffs, std::size_t order, Scale scale,
                 bool trackTail = true) {
  std::vector<FixedDec> p;
  for (const char* c : coeffs) p.push_back(d(c));
  return TruncSeries::fromPolynomial(p, order, scale, trackTail);
}

bool isPoint(const TruncSeries& s, std::initializer_list<const char*> expected) {
  std::size_t j = 0;
  for (const char* e : expected) {
    if (j > s.order() || !(s[j] == DecInterval(d(e)))) return false;
    ++j;
  }
  for (; j <= s.order(); ++j) {
    if (!(s[j] == DecInterval(FixedDec()))) return false;
  }
  return true;
}

std::vector<FixedDec> randomPoly(std::mt19937_64& rng, std::size_t terms, long bound, unsigned digits) {
  std::vector<FixedDec> p;
  for (std::size_t i = 0; i < terms; ++i) p.push_back(oracle::randomDecimal(rng, bound, digits));
  return p;
}

oracle::Poly exact(const std::vector<FixedDec>& p) {
  oracle::Poly r;
  for (const FixedDec& x : p) r.push_back(q(x));
  return r;
}

// Kept coefficients contain `truth` and the tail bounds what lies beyond.
void checkEncloses(const TruncSeries& s, const oracle::Poly& truth) {
  for (std::size_t j = 0; j <= s.order(); ++j) {
    const mpq_class t = j < truth.size() ? truth[j] : mpq_class(0);
    CHECK(oracle::contains(s[j], t));
  }
  REQUIRE(s.tracksTail());
  mpq_class rest = 0;
  for (std::size_t j = s.order() + 1; j < truth.size(); ++j) rest += abs(truth[j]);
  CHECK(rest <= q(*s.tail()));
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("addition and scaling") {
    const TruncSeries a = poly({"1", "1"}, 2, 2);
    const TruncSeries b = poly({"1", "-1"}, 2, 2);
    CHECK(isPoint(sAdd(a, b), {"2"}));
    CHECK(isPoint(sSub(a, b), {"0", "2"}));
    CHECK(isPoint(sScale(a, FixedDec()), {}));
    CHECK(isPoint(sScale(a, d("2.5")), {"2.5", "2.5"}));
    CHECK(isPoint(sAddConstant(a, DecInterval(d("-1"))), {"0", "1"}));
    CHECK_THROWS_AS(sAdd(a, poly({"1"}, 3, 2)), std::invalid_argument);
  }

  TEST_CASE("fromPolynomial tail and affinity") {
    const TruncSeries s = poly({"1", "2", "-3", "0.5"}, 1, 3);
    CHECK(*s.tail() == d("3.5"));
    CHECK(s.isAffine());
    CHECK(poly({"1", "2", "0"}, 2, 3).isAffine());
    CHECK_FALSE(poly({"1", "2", "0.001"}, 2, 3).isAffine());
    CHECK(s.keptNormUpper() == d("3"));
  }

  TEST_CASE("small products") {
    CHECK(isPoint(sMul(poly({"1", "1"}, 2, 4), poly({"1", "-1"}, 2, 4), 4), {"1", "0", "-1"}));
    const TruncSeries a = poly({"0.3", "-1.2", "4"}, 2, 4);
    CHECK(isPoint(sMul(a, poly({"1"}, 2, 4), 4), {"0.3", "-1.2", "4"}));
    const TruncSeries p = sMul(poly({"1", "2", "3"}, 1, 2), poly({"1", "1"}, 1, 2), 2);
    // (1 + 2w + 3w^2)(1 + w) = 1 + 3w + 5w^2 + 3w^3
    CHECK(isPoint(p, {"1", "3"}));
    CHECK(q(*p.tail()) >= 8);
  }

  TEST_CASE("products enclose the exact product, short and long") {
    std::mt19937_64 rng(5);
    for (std::size_t order : {3u, 11u, 12u, 40u, 90u}) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto pa = randomPoly(rng, 2 * order + 3, 3, 5);
        const auto pb = randomPoly(rng, order + 5, 2, 6);
        const Scale ws = 8 + trial;
        const TruncSeries a = TruncSeries::fromPolynomial(pa, order, 6);
        const TruncSeries b = TruncSeries::fromPolynomial(pb, order, 6);
        checkEncloses(sMul(a, b, ws), oracle::mul(exact(pa), exact(pb)));
      }
    }
  }

  TEST_CASE("products of interval series") {
    std::mt19937_64 rng(17);
    for (std::size_t order : {4u, 30u}) {
      std::vector<DecInterval> ca, cb;
      for (std::size_t j = 0; j <= order; ++j) {
        ca.push_back(oracle::randomInterval(rng, 2, 4));
        cb.push_back(oracle::randomInterval(rng, 2, 3));
      }
      const TruncSeries a(ca, 4, d("0"));
      const TruncSeries b(cb, 4, d("0"));
      const TruncSeries p = sMul(a, b, 5);
      for (int sample = 0; sample < 20; ++sample) {
        oracle::Poly xa, xb;
        for (std::size_t j = 0; j <= order; ++j) {
          xa.push_back(oracle::pointIn(rng, ca[j]));
          xb.push_back(oracle::pointIn(rng, cb[j]));
        }
        const oracle::Poly truth = oracle::mul(xa, xb);
        for (std::size_t j = 0; j <= order; ++j) CHECK(oracle::contains(p[j], truth[j]));
      }
    }
  }

  TEST_CASE("Horner examples") {
    const std::vector<DecInterval> p23{DecInterval(d("2")), DecInterval(d("3"))};
    CHECK(isPoint(sPolyEvalHorner(p23, poly({"0", "1"}, 2, 2), 2), {"2", "3"}));
    const std::vector<DecInterval> c{DecInterval(d("0.7"))};
    CHECK(isPoint(sPolyEvalHorner(c, poly({"5", "-3", "1"}, 2, 2), 2), {"0.7"}));
    const std::vector<DecInterval> sq{DecInterval(FixedDec()), DecInterval(FixedDec()), DecInterval(d("1"))};
    CHECK(isPoint(sPolyEvalHorner(sq, poly({"1", "1"}, 2, 2), 2), {"1", "2", "1"}));
    CHECK(isPoint(sPolyEvalBabyGiant(sq, poly({"1", "1"}, 2, 2), 2), {"1", "2", "1"}));
  }

  TEST_CASE("polynomial evaluation encloses the exact composition") {
    std::mt19937_64 rng(23);
    struct Case {
      std::size_t terms, order, xTerms;
    };
    for (Case c : {Case{5, 6, 2}, Case{40, 30, 2}, Case{70, 45, 2}, Case{9, 8, 4}, Case{30, 20, 6},
                   Case{17, 25, 25}}) {
      std::vector<FixedDec> pp = randomPoly(rng, c.terms, 1, 4);
      std::vector<FixedDec> xp = randomPoly(rng, c.xTerms, 1, 3);
      if (c.xTerms == 2) xp[1] = oracle::randomDecimal(rng, 1, 2);
      std::vector<DecInterval> p;
      for (const FixedDec& v : pp) p.emplace_back(v);
      const TruncSeries x = TruncSeries::fromPolynomial(xp, c.order, 6);
      const oracle::Poly truth = oracle::compose(exact(pp), exact(xp));
      const TruncSeries horner = sPolyEvalHorner(p, x, 14);
      const TruncSeries bsgs = sPolyEvalBabyGiant(p, x, 14);
      checkEncloses(horner, truth);
      checkEncloses(bsgs, truth);
      // Rounding error stays small relative to sum |p_i| ||x||^i.
      mpq_class xNorm = 0, size = 0, power = 1;
      for (const FixedDec& v : xp) xNorm += abs(q(v));
      for (const FixedDec& v : pp) {
        size += abs(q(v)) * power;
        power *= xNorm;
      }
      if (size < 1) size = 1;
      for (std::size_t j = 0; j <= c.order; ++j) {
        CHECK(q(width(bsgs[j])) <= size * q(1, 1000000000));
        CHECK(q(width(horner[j])) <= size * q(1, 1000000000));
      }
    }
  }

  TEST_CASE("evaluation without tail tracking") {
    std::mt19937_64 rng(29);
    std::vector<FixedDec> pp = randomPoly(rng, 20, 1, 4);
    std::vector<DecInterval> p;
    for (const FixedDec& v : pp) p.emplace_back(v);
    const std::vector<FixedDec> xp{d("0.1"), d("0.3"), d("-0.2")};
    const TruncSeries x = TruncSeries::fromPolynomial(xp, 10, 6, false);
    const oracle::Poly truth = oracle::compose(exact(pp), exact(xp));
    const TruncSeries s = sPolyEvalBabyGiant(p, x, 12);
    CHECK_FALSE(s.tracksTail());
    for (std::size_t j = 0; j <= 10; ++j) CHECK(oracle::contains(s[j], truth[j]));
  }

  TEST_CASE("division by an affine series") {
    CHECK(isPoint(sDivByAffine(poly({"1", "2.5"}, 3, 2), d("1"), d("2.5"), 4), {"1"}));
    CHECK(isPoint(sDivByAffine(poly({"1"}, 2, 2), d("1"), d("2.5"), 4), {"1", "-2.5", "6.25"}));
    CHECK(isPoint(sDivByAffine(poly({"0"}, 3, 2), d("1"), d("2.5"), 4), {}));
    CHECK_THROWS_AS(sDivByAffine(poly({"1"}, 2, 2), FixedDec(), d("1"), 4), std::domain_error);
    std::mt19937_64 rng(31);
    const auto pa = randomPoly(rng, 8, 2, 4);
    const TruncSeries a = TruncSeries::fromPolynomial(pa, 7, 4);
    const TruncSeries g = sDivByAffine(a, d("0.8"), d("-0.3"), 30);
    const TruncSeries back = sMul(g, poly({"0.8", "-0.3"}, 7, 30), 30);
    for (std::size_t j = 0; j <= 7; ++j) CHECK(back[j].contains(pa[j]));
  }
}
