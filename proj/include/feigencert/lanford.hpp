#pragma once

// Lanford coordinates for even analytic functions near the Feigenbaum
// fixed point, and the operators acting on them.
//
// A point (u, nu_1, nu_2, ...) of R + l1 stands for
//
//   psi(z) = 1 - z^2 * (u/10 + sum_i nu_i w^i),   w = (z^2 - 1)/2.5,
//
// so psi(0) = 1 and evenness hold by construction. The l1 norm
// |u| + sum |nu_i| is the metric in which Phi contracts.
//
//   T psi(x)  = psi(psi(lambda x)) / lambda,  lambda = psi(1) = 1 - u/10
//   J (u, nu) = (u/3.669, -nu)
//   Phi psi   = psi - J(T psi - psi)

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "feigencert/decfix.hpp"

namespace feigencert {

/// Exact coordinates (u, nu_1..nu_K). All entries share one scale: the
/// constructor rescales everything to the largest scale present.
class LanfordCoords {
 public:
  LanfordCoords() = default;
  LanfordCoords(FixedDec u, std::vector<FixedDec> nu);

  const FixedDec& u() const { return u_; }
  std::span<const FixedDec> nu() const { return nu_; }
  /// nu_i for i >= 1; zero past the stored entries.
  FixedDec nuAt(std::size_t i) const;
  /// Number of nu entries.
  std::size_t size() const { return nu_.size(); }
  Scale scale() const { return u_.scale(); }

  friend bool operator==(const LanfordCoords&, const LanfordCoords&) = default;

 private:
  FixedDec u_;
  std::vector<FixedDec> nu_;
};

/// Enclosures of the first K coordinates of some exact function, plus an
/// optional bound on sum_{i>K} |nu_i| of that function.
struct IntervalCoords {
  DecInterval u;
  std::vector<DecInterval> nu;
  std::optional<FixedDec> tail;
};

/// The ten starting coordinates u, nu_1..nu_9 as printed, 41 fractional digits.
std::span<const std::string_view> psi0Table();
/// psi_0 as coordinates (scale 41).
LanfordCoords psi0();

// Operator constants; all are finite decimals.
const FixedDec& jScaling();  // 3.669
const FixedDec& wScaling();  // 2.5

/// |u| + sum |nu_i|, exact.
FixedDec norm(const LanfordCoords& c);
/// l1 distance, exact; the shorter coordinate vector is padded with zeros.
FixedDec distance(const LanfordCoords& a, const LanfordCoords& b);

/// Upper and lower bounds on ||x - c|| over everything x encloses. Coordinates
/// of c past x's kept range are charged against x's tail bound, which must be
/// tracked (std::invalid_argument otherwise) when c has such coordinates or
/// when the upper bound is requested.
FixedDec distanceUpper(const IntervalCoords& x, const LanfordCoords& c);
FixedDec distanceLower(const IntervalCoords& x, const LanfordCoords& c);
/// Upper bound on ||x - y||; both must keep the same number of coordinates
/// and track tails.
FixedDec distanceUpper(const IntervalCoords& x, const IntervalCoords& y);

/// (u/3.669, -nu). u is enclosed at `workScale`; nu is negated exactly.
IntervalCoords applyJ(const LanfordCoords& c, Scale workScale);
IntervalCoords applyJ(const IntervalCoords& c, Scale workScale);

/// Encloses (v, mu_1..mu_K) with T psi(z) = 1 - z^2 (v/10 + sum mu_i w^i).
/// Every intermediate series is truncated at order K. With `trackTail` the
/// result also bounds sum_{i>K} |mu_i| of the full polynomial T psi.
/// Throws std::domain_error when lambda = 1 - u/10 is zero.
IntervalCoords applyT(const LanfordCoords& c, std::size_t order, Scale workScale,
                      bool trackTail = false);

/// Phi psi = (u - (v - u)/3.669, mu) where (v, mu) = T psi.
IntervalCoords applyPhi(const LanfordCoords& c, std::size_t order, Scale workScale,
                        bool trackTail = false);

/// Taylor coefficients a_1..a_order of psi(z) = 1 + sum a_j z^(2j), exact
/// and then rounded outward to `workScale`.
std::vector<DecInterval> toTaylor(const LanfordCoords& c, std::size_t order, Scale workScale);
/// Inverse basis change: coordinates of 1 + sum a_j z^(2j) (exact).
LanfordCoords fromTaylor(std::span<const FixedDec> a);

/// Encloses psi(z) for every z in the interval.
DecInterval evalPsi(const LanfordCoords& c, const DecInterval& z, Scale workScale);

}  // namespace feigencert
