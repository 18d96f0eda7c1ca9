#pragma once

// Truncated power series in w = (z^2 - 1)/2.5 with interval coefficients.
//
// A TruncSeries of order K holds enclosures of c_0..c_K. Arithmetic happens
// in R[[w]]/(w^(K+1)), where truncation is a ring homomorphism, so the kept
// coefficients of a product depend only on the kept coefficients of the
// factors.
//
// A series may additionally carry a tail bound: an upper bound on
// sum_{j>K} |c_j| for the exact (untruncated) object the series stands for.
// Ring operations propagate it, which turns the series into an l1 Taylor
// model. Series without a tail bound only describe the residue class mod
// w^(K+1); combining such a series with a tracked one drops the bound.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "feigencert/decfix.hpp"

namespace feigencert {

class TruncSeries {
 public:
  TruncSeries() = default;
  /// Zero series of the given order; every coefficient is stored at `scale`.
  TruncSeries(std::size_t order, Scale scale, bool trackTail = false);
  /// Coefficients are rounded outward (or rescaled exactly) to `scale`.
  /// `coeffs` must be non-empty; the order is coeffs.size() - 1.
  TruncSeries(std::vector<DecInterval> coeffs, Scale scale,
              std::optional<FixedDec> tail = std::nullopt);

  /// Exact polynomial p_0 + p_1 w + ... reduced to `order`. The tail bound is
  /// the l1 norm of the dropped coefficients.
  static TruncSeries fromPolynomial(std::span<const FixedDec> poly, std::size_t order,
                                    Scale scale, bool trackTail = true);
  static TruncSeries constant(const DecInterval& c, std::size_t order, Scale scale,
                              bool trackTail = true);

  std::size_t order() const { return coeffs_.size() - 1; }
  Scale scale() const { return scale_; }
  const DecInterval& operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const DecInterval> coeffs() const { return coeffs_; }

  const std::optional<FixedDec>& tail() const { return tail_; }
  bool tracksTail() const { return tail_.has_value(); }

  /// Upper bound on sum_j |c_j| over the kept coefficients.
  FixedDec keptNormUpper() const;

  /// True if every kept coefficient above order 1 is exactly zero. The tail may be nonzero.
  bool isAffine() const;

 private:
  std::vector<DecInterval> coeffs_{DecInterval()};
  Scale scale_ = 0;
  std::optional<FixedDec> tail_ = FixedDec();
};

/// Coefficientwise sums are exact; the result scale is the larger scale.
/// Orders must agree (std::invalid_argument otherwise).
TruncSeries sAdd(const TruncSeries& a, const TruncSeries& b);
TruncSeries sSub(const TruncSeries& a, const TruncSeries& b);
/// c + a, exact.
TruncSeries sAddConstant(const TruncSeries& a, const DecInterval& c);
/// s * a, rounded outward to a.scale().
TruncSeries sScale(const TruncSeries& a, const DecInterval& s);
TruncSeries sScale(const TruncSeries& a, const FixedDec& s);

/// Truncated Cauchy product, accumulated exactly and rounded outward once
/// per coefficient at `workScale`.
TruncSeries sMul(const TruncSeries& a, const TruncSeries& b, Scale workScale);

/// sum_i p_i x^i by Horner's rule: deg(p) ring multiplications.
TruncSeries sPolyEvalHorner(std::span<const DecInterval> p, const TruncSeries& x,
                            Scale workScale);

/// Same enclosure semantics as sPolyEvalHorner, evaluated with the
/// baby-step/giant-step scheme: about 2*sqrt(deg p) series products instead
/// of deg p.
TruncSeries sPolyEvalBabyGiant(std::span<const DecInterval> p, const TruncSeries& x,
                               Scale workScale);

/// The series g with (c0 + c1 w) g == a (mod w^(K+1)), from
/// g_0 = a_0/c0, g_j = (a_j - c1 g_{j-1})/c0. The result carries no tail
/// bound. Throws std::domain_error if c0 == 0.
TruncSeries sDivByAffine(const TruncSeries& a, const FixedDec& c0, const FixedDec& c1,
                         Scale workScale);

}  // namespace feigencert
