#include <doctest.h>

#include <random>

#include "feigencert/decfix.hpp"
#include "oracle.hpp"

using namespace feigencert;
using oracle::q;

namespace {

FixedDec d(const char* s) { return FixedDec::parse(s); }

DecInterval iv(const char* lo, const char* hi) { return DecInterval(d(lo), d(hi)); }

}  // namespace

TEST_SUITE("decfix") {
  TEST_CASE("parse and render") {
    CHECK(d("1.25").str() == "1.25");
    CHECK(d("-0.050").str() == "-0.050");
    CHECK(d("+7").str() == "7");
    CHECK(d(".5").str() == "0.5");
    CHECK(d("-0.0").signum() == 0);
    CHECK(d("-0.0").sign() == 1);
    CHECK(d("12.3400").scale() == 4);
    CHECK(d("-3.5").mantissa() == 35);
    CHECK_THROWS_AS(d("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(d(""), std::invalid_argument);
    CHECK_THROWS_AS(d("-"), std::invalid_argument);
    CHECK_THROWS_AS(d("1e5"), std::invalid_argument);
  }

  TEST_CASE("exact ring operations") {
    CHECK((d("1.25") + d("0.75")) == d("2.00"));
    CHECK((d("0.999") + d("0.001")).str() == "1.000");
    CHECK((d("3.7") + FixedDec()) == d("3.7"));
    CHECK((d("0.5") * d("0.5")).str() == "0.25");
    CHECK((d("-0.3") * d("0.3")) == d("-0.09"));
    CHECK((d("2.71828") * FixedDec(1)) == d("2.71828"));
    CHECK((d("1") - d("0.001")).str() == "0.999");
    CHECK(d("0.10") == d("0.1"));
    CHECK(d("-0.2") < d("0.1"));
    CHECK(d("1.000001") > d("1"));
  }

  TEST_CASE("rescaling never rounds") {
    CHECK(d("1.5").rescaled(4).str() == "1.5000");
    CHECK_THROWS_AS(d("1.55").rescaled(1), std::invalid_argument);
  }

  TEST_CASE("roundToScale directions") {
    CHECK(roundToScale(d("0.33333"), 4, Rounding::Nearest).str() == "0.3333");
    CHECK(roundToScale(d("0.00005"), 4, Rounding::Nearest).str() == "0.0001");
    CHECK(roundToScale(d("-0.00005"), 4, Rounding::Nearest).str() == "-0.0001");
    CHECK(roundToScale(d("-0.6666"), 2, Rounding::Down).str() == "-0.67");
    CHECK(roundToScale(d("-0.6666"), 2, Rounding::Up).str() == "-0.66");
    CHECK(roundToScale(d("0.6601"), 2, Rounding::Up).str() == "0.67");
    CHECK(roundToScale(d("0.6699"), 2, Rounding::Down).str() == "0.66");
    CHECK(roundToScale(d("0.5"), 3, Rounding::Down).str() == "0.500");
  }

  TEST_CASE("divRound") {
    CHECK(divRound(d("1"), d("3"), 5, Rounding::Down).str() == "0.33333");
    CHECK(divRound(d("1"), d("3"), 5, Rounding::Up).str() == "0.33334");
    CHECK(divRound(d("1"), d("1"), 5, Rounding::Nearest).str() == "1.00000");
    CHECK(divRound(d("1"), d("0.39953528"), 7, Rounding::Nearest).str() == "2.5029079");
    CHECK(divRound(d("-1"), d("3"), 2, Rounding::Down).str() == "-0.34");
    CHECK(divRound(d("1"), d("-3"), 2, Rounding::Up).str() == "-0.33");
    CHECK(divRound(d("123.4"), d("0.01"), 0, Rounding::Down).str() == "12340");
    CHECK_THROWS_AS(divRound(d("1"), d("0.000"), 3, Rounding::Down), std::domain_error);
  }

  TEST_CASE("divRound agrees with rational floor and ceiling") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      const FixedDec a = oracle::randomDecimal(rng, 50, 4);
      FixedDec b = oracle::randomDecimal(rng, 5, 3);
      if (b.isZero()) continue;
      const mpq_class exact = q(a) / q(b);
      const FixedDec lo = divRound(a, b, 6, Rounding::Down);
      const FixedDec hi = divRound(a, b, 6, Rounding::Up);
      const FixedDec near = divRound(a, b, 6, Rounding::Nearest);
      CHECK(q(lo) <= exact);
      CHECK(exact <= q(hi));
      CHECK(q(hi) - q(lo) <= q(1, 1000000));
      CHECK(abs(q(near) - exact) <= q(1, 2000000));
    }
  }

  TEST_CASE("interval basics") {
    CHECK_THROWS_AS(iv("1", "0"), std::invalid_argument);
    CHECK(width(DecInterval(d("1"))).isZero());
    CHECK(width(iv("-0.5", "0.25")) == d("0.75"));
    CHECK(iv("-1", "2").containsZero());
    CHECK_FALSE(iv("0.1", "2").containsZero());
    CHECK(iv("-3", "2").magnitude() == d("3"));
    CHECK(iv("-3", "2").mignitude().isZero());
    CHECK(iv("-3", "-2").mignitude() == d("2"));
    CHECK(iv("1", "2").midpoint() == d("1.5"));
    CHECK(iv("0", "0.1").midpoint() == d("0.05"));
    CHECK(hull(iv("0", "1"), iv("2", "3")) == iv("0", "3"));
    CHECK((-iv("1", "2")) == iv("-2", "-1"));
  }

  TEST_CASE("interval operations on small cases") {
    CHECK(iAdd(DecInterval(d("1")), DecInterval(d("2")), 0) == DecInterval(d("3")));
    CHECK(iMul(iv("-3", "7"), DecInterval(FixedDec()), 4) == DecInterval(FixedDec()));
    const DecInterval sq = iPowInt(iv("1.414", "1.415"), 2, 4);
    CHECK(sq.contains(iv("1.999396", "2.002225")));
    CHECK(iv("1.9993", "2.0023").contains(sq));
    CHECK(iPowInt(iv("-1", "2"), 2, 0) == iv("0", "4"));
    CHECK(iPowInt(iv("-3", "-2"), 2, 0) == iv("4", "9"));
    CHECK(iPowInt(iv("-3", "-2"), 3, 0) == iv("-27", "-8"));
    CHECK(iPowInt(iv("-3", "-2"), 0, 2) == DecInterval(d("1.00")));
    const DecInterval third = iDivScalar(DecInterval(d("1")), d("3"), 3);
    CHECK(third == iv("0.333", "0.334"));
    CHECK_THROWS_AS(iDivScalar(DecInterval(d("1")), iv("-1", "1"), 3), std::domain_error);
    CHECK(roundOutward(iv("-0.123", "0.456"), 1) == iv("-0.2", "0.5"));
  }

  TEST_CASE("outward rounding widens by at most one unit per endpoint per operation") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Scale s = 6;
      DecInterval x(oracle::randomDecimal(rng, 1, 6));
      const FixedDec start = x.lo();
      FixedDec factor = oracle::randomDecimal(rng, 1, 9);
      mpq_class exact = q(start);
      const int n = 20;
      for (int i = 0; i < n; ++i) {
        x = iMul(x, factor, s);
        exact *= q(factor);
        x = iAdd(x, DecInterval(d("0.0000001")), s);
        exact += q(1, 10000000);
      }
      CHECK(oracle::contains(x, exact));
      // Contraction by |factor| <= 1 keeps earlier widths from growing.
      CHECK(q(width(x)) <= q(2 * 2 * n, 1000000));
    }
  }

  TEST_CASE("randomized containment against the rational oracle") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
      const DecInterval x = oracle::randomInterval(rng, 20, 3);
      const DecInterval y = oracle::randomInterval(rng, 20, 4);
      const Scale ws = 2 + i % 5;
      const mpq_class a = oracle::pointIn(rng, x), b = oracle::pointIn(rng, y);
      CHECK(oracle::contains(iAdd(x, y, ws), a + b));
      CHECK(oracle::contains(iSub(x, y, ws), a - b));
      CHECK(oracle::contains(iMul(x, y, ws), a * b));
      CHECK(oracle::contains(iPowInt(x, 1 + i % 4, ws), [&] {
        mpq_class p = 1;
        for (int k = 0; k < 1 + i % 4; ++k) p *= a;
        return p;
      }()));
      if (!y.containsZero()) CHECK(oracle::contains(iDivScalar(x, y, ws), a / b));
      checked += 5;
    }
    CHECK(checked >= 10000);
  }
}
