#pragma once

// Exact rational reference implementations used by the tests.

#include <gmpxx.h>

#include <random>
#include <vector>

#include "feigencert/decfix.hpp"
#include "feigencert/lanford.hpp"
#include "feigencert/series.hpp"

namespace oracle {

using feigencert::DecInterval;
using feigencert::FixedDec;
using feigencert::LanfordCoords;

/// Coefficients in increasing degree.
using Poly = std::vector<mpq_class>;

inline mpq_class q(const FixedDec& x) {
  mpq_class r(x.units(), feigencert::powerOfTen(x.scale()));
  r.canonicalize();
  return r;
}

inline mpq_class q(long num, long den = 1) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

inline bool contains(const DecInterval& x, const mpq_class& v) { return q(x.lo()) <= v && v <= q(x.hi()); }

inline Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Poly scale(const Poly& a, const mpq_class& c) {
  Poly r(a);
  for (auto& x : r) x *= c;
  return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// p(x(t)).
inline Poly compose(const Poly& p, const Poly& x) {
  Poly r;
  for (std::size_t i = p.size(); i-- > 0;) r = add(mul(r, x), Poly{p[i]});
  return r;
}

inline Poly truncated(Poly p, std::size_t count) {
  p.resize(count);
  return p;
}

/// P(w) = u/10 + sum nu_i w^i.
inline Poly coordsPoly(const LanfordCoords& c) {
  Poly p{q(c.u()) / 10};
  for (const FixedDec& v : c.nu()) p.push_back(q(v));
  return p;
}

/// psi as a polynomial in t = z^2: 1 - t P((t - 1)/2.5).
inline Poly psiInT(const LanfordCoords& c) {
  const Poly w{q(-2, 5), q(2, 5)};
  return add(Poly{1}, scale(mul(Poly{0, 1}, compose(coordsPoly(c), w)), -1));
}

/// Lanford coordinates (u, nu_1, ...) of the even polynomial f(t), f(0) = 1.
inline Poly coordsOf(const Poly& f) {
  // (1 - f(t))/t, then t = 1 + 2.5 w.
  Poly p;
  for (std::size_t i = 1; i < f.size(); ++i) p.push_back(-f[i]);
  Poly r = compose(p, Poly{1, q(5, 2)});
  if (r.empty()) r.push_back(0);
  r[0] *= 10;
  return r;
}

/// Exact (v, mu_1, ...) of T psi, all coefficients.
inline Poly exactT(const LanfordCoords& c) {
  const Poly f = psiInT(c);
  mpq_class lambda = 1 - q(c.u()) / 10;
  // y(t) = psi(lambda^2 t) in t = x^2.
  Poly y = f;
  mpq_class power = 1;
  for (auto& a : y) {
    a *= power;
    power *= lambda * lambda;
  }
  const Poly tpsi = scale(compose(f, mul(y, y)), 1 / lambda);
  return coordsOf(tpsi);
}

/// A decimal with `digits` fractional digits, uniform in [-bound, bound].
inline FixedDec randomDecimal(std::mt19937_64& rng, long bound, unsigned digits) {
  const long unit = static_cast<long>(feigencert::powerOfTen(digits).get_si());
  std::uniform_int_distribution<long> d(-bound * unit, bound * unit);
  return FixedDec(mpz_class(d(rng)), digits);
}

inline DecInterval randomInterval(std::mt19937_64& rng, long bound, unsigned digits) {
  FixedDec a = randomDecimal(rng, bound, digits);
  FixedDec b = randomDecimal(rng, bound, digits);
  if (b < a) std::swap(a, b);
  return DecInterval(a, b);
}

/// A rational point of x: an endpoint or a random interior point.
inline mpq_class pointIn(std::mt19937_64& rng, const DecInterval& x) {
  std::uniform_int_distribution<int> pick(0, 3);
  const mpq_class lo = q(x.lo()), hi = q(x.hi());
  switch (pick(rng)) {
    case 0: return lo;
    case 1: return hi;
    default: {
      std::uniform_int_distribution<long> t(0, 1000);
      return lo + (hi - lo) * q(t(rng), 1000);
    }
  }
}

}  // namespace oracle
