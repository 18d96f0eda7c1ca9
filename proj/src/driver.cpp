#include "feigencert/driver.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace feigencert {

FixedDec propertyTwoBound(std::size_t m) {
  mpz_class units;
  mpz_ui_pow_ui(units.get_mpz_t(), 93, m);
  return FixedDec(std::move(units), 2 * m + 2);
}

void checkPropertyOne(const IterationState& s) {
  const Scale scale = stateScale(s.m);
  if (s.coords.size() + 1 != stateCount(s.m)) {
    throw std::logic_error("state " + std::to_string(s.m) + " carries " +
                           std::to_string(s.coords.size() + 1) + " coordinates, expected " +
                           std::to_string(stateCount(s.m)));
  }
  if (s.coords.scale() != scale) {
    throw std::logic_error("state " + std::to_string(s.m) + " has scale " +
                           std::to_string(s.coords.scale()) + ", expected " + std::to_string(scale));
  }
  const FixedDec hundred(100);
  auto check = [&](const FixedDec& x) {
    if (!(x.abs() < hundred)) {
      throw std::logic_error("state " + std::to_string(s.m) + ": coefficient " + x.str() +
                             " has more than two integer digits");
    }
  };
  check(s.coords.u());
  for (const FixedDec& v : s.coords.nu()) check(v);
}

IterationState initialState() {
  IterationState s{0, psi0()};
  checkPropertyOne(s);
  return s;
}

std::size_t defaultGuardDigits(std::size_t m) { return 8 + m / 50; }

namespace {

// Rounds the midpoint of x to `scale`; returns the rounded value and the
// worst distance from it to any point of x.
std::pair<FixedDec, FixedDec> settleCoefficient(const DecInterval& x, Scale scale) {
  FixedDec r = roundToScale(x.midpoint(), scale, Rounding::Nearest);
  FixedDec err = max((r - x.lo()).abs(), (x.hi() - r).abs());
  return {std::move(r), std::move(err)};
}

}  // namespace

IterationState centralStep(const IterationState& s, StepReport* report, int maxRetries) {
  const std::size_t keep = s.coords.size() + 1;  // nu_1..nu_{10+m}
  const Scale target = stateScale(s.m + 1);
  const FixedDec ulp = unitInLastPlace(target);
  std::size_t guard = defaultGuardDigits(s.m);

  for (int attempt = 0; attempt <= maxRetries; ++attempt, guard *= 2) {
    const Scale workScale = target + guard;
    const IntervalCoords phi = applyPhi(s.coords, keep, workScale);

    FixedDec worst;
    bool certified = true;
    auto [u, uErr] = settleCoefficient(phi.u, target);
    worst = uErr;
    certified = !(ulp < uErr);
    std::vector<FixedDec> nu;
    nu.reserve(keep);
    for (std::size_t i = 0; certified && i < keep; ++i) {
      auto [v, vErr] = settleCoefficient(phi.nu[i], target);
      if (ulp < vErr) certified = false;
      worst = max(worst, vErr);
      nu.push_back(std::move(v));
    }
    if (!certified) continue;

    IterationState next{s.m + 1, LanfordCoords(std::move(u), std::move(nu))};
    checkPropertyOne(next);
    if (report) *report = StepReport{workScale, attempt, worst};
    return next;
  }
  throw CertificationError("central step " + std::to_string(s.m) + " -> " +
                           std::to_string(s.m + 1) + " could not certify its coefficients");
}

std::size_t leastStepsForBound(const FixedDec& target) {
  if (target.signum() <= 0) throw std::invalid_argument("leastStepsForBound: target must be positive");
  mpz_class power(1);
  for (std::size_t m = 0;; ++m) {
    if (FixedDec(power, 2 * m + 2) <= target) return m;
    power *= 93;
  }
}

std::size_t stepsForPrecision(unsigned n) { return leastStepsForBound(unitInLastPlace(n)); }

bool errorChainHolds(std::size_t horizon) {
  mpz_class p93(1), p5, p13, p100(1);
  mpz_ui_pow_ui(p5.get_mpz_t(), 5, 11);
  mpz_ui_pow_ui(p13.get_mpz_t(), 13, 11);
  for (std::size_t m = 0; m < horizon; ++m) {
    // (11+m) 10^-(42+m) <= 10^-5 93^m 10^-2m
    if (!(FixedDec(mpz_class(static_cast<unsigned long>(11 + m)), 42 + m) <=
          FixedDec(p93, 2 * m + 5))) {
      return false;
    }
    // 31/4 (5/13)^(11+m) <= 2.5e-4 0.93^m  <=>  31 5^(11+m) 10^(2m+4) <= 10 13^(11+m) 93^m
    if (31 * p5 * p100 * 10000 > 10 * p13 * p93) return false;
    p93 *= 93;
    p5 *= 5;
    p13 *= 13;
    p100 *= 100;
  }
  return true;
}

IterationState advance(IterationState s, std::size_t targetM, const RunOptions& options) {
  if (!errorChainHolds(targetM + 1)) {
    throw std::logic_error("error-chain inequalities fail below step " + std::to_string(targetM));
  }
  while (s.m < targetM) {
    StepReport report;
    s = centralStep(s, &report);
    if (options.checkpoint && options.checkpointEvery > 0 && s.m % options.checkpointEvery == 0) {
      saveCheckpoint(s, *options.checkpoint);
    }
    if (options.onStep && !options.onStep(s, report)) break;
  }
  if (options.checkpoint) saveCheckpoint(s, *options.checkpoint);
  return s;
}

IterationState run(unsigned n, const RunOptions& options) {
  return advance(initialState(), stepsForPrecision(n), options);
}

namespace {

const FixedDec& tenth() {
  static const FixedDec value = FixedDec::parse("0.1");
  return value;
}

// Rounds the midpoint to n digits and bounds the distance to the enclosure.
std::pair<FixedDec, FixedDec> printable(const DecInterval& enclosure, unsigned n) {
  FixedDec value = roundToScale(enclosure.midpoint(), n, Rounding::Nearest);
  const FixedDec err = max((value - enclosure.lo()).abs(), (enclosure.hi() - value).abs());
  return {std::move(value), roundToScale(err, static_cast<Scale>(n) + 3, Rounding::Up)};
}

}  // namespace

std::optional<FixedDec> contractionRadius(const IterationState& s) {
  static const FixedDec ball = FixedDec::parse("0.009");
  const Scale workScale = s.coords.scale() + 10;
  const IntervalCoords phi = applyPhi(s.coords, s.coords.size(), workScale, true);
  FixedDec radius = distanceUpper(phi, s.coords) * FixedDec(10);
  if (ball < distance(s.coords, psi0()) + radius) return std::nullopt;
  return radius;
}

FixedDec distanceToFixedPoint(const IterationState& s) {
  FixedDec b = s.certifiedBound();
  const std::optional<FixedDec> r = contractionRadius(s);
  return r && *r < b ? *r : b;
}

namespace {

// Result of alpha at step s without the 10^-n acceptance test; empty when
// g(1) cannot be separated from zero.
std::optional<AlphaResult> alphaAttempt(const IterationState& s, unsigned n) {
  const FixedDec r = distanceToFixedPoint(s);
  const FixedDec radius = r * tenth();
  const FixedDec g1 = FixedDec(1) - s.coords.u() * tenth();
  const DecInterval g1Enclosure(g1 - radius, g1 + radius);
  if (g1Enclosure.containsZero()) return std::nullopt;
  const Scale workScale = static_cast<Scale>(n) + 20;
  DecInterval enclosure = iDivScalar(DecInterval(FixedDec(1)), g1Enclosure, workScale);
  auto [value, err] = printable(enclosure, n);
  return AlphaResult{std::move(value), std::move(err), std::move(enclosure), s.m, r};
}

// a_1..a_k without the acceptance test.
std::vector<TaylorCoefficient> taylorAttempt(const IterationState& s, std::size_t k, unsigned n) {
  if (k == 0) throw std::invalid_argument("taylor: order must be at least 1");
  // |a_j(psi) - a_j(g)| <= 0.4 ||psi - g||: the weight of nu_i in a_j is
  // binom(i, j-1) 0.4^i <= 0.4 * 0.8^(i-1), and the weight of u is 0.1.
  const FixedDec radius = distanceToFixedPoint(s) * FixedDec::parse("0.4");
  const Scale exact = s.coords.scale() + s.coords.size() + 1;
  const std::vector<DecInterval> coeffs = toTaylor(s.coords, k, exact);
  std::vector<TaylorCoefficient> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    DecInterval enclosure(coeffs[j].lo() - radius, coeffs[j].hi() + radius);
    auto [value, err] = printable(enclosure, n);
    out.push_back(TaylorCoefficient{j + 1, std::move(value), std::move(err), std::move(enclosure)});
  }
  return out;
}

// Rough count of decimal orders by which err exceeds 10^-n.
std::size_t digitsShort(const FixedDec& err, unsigned n) {
  const long magnitude = static_cast<long>(err.mantissa().get_str(10).size()) -
                         static_cast<long>(err.scale());
  return static_cast<std::size_t>(std::max(1L, magnitude + static_cast<long>(n)));
}

// Each step gains roughly half a digit; aim a little past the estimate.
std::size_t nextTarget(std::size_t m, const FixedDec& err, unsigned n) {
  return m + 2 * digitsShort(err, n) + 1;
}

}  // namespace

AlphaResult alpha(const IterationState& s, unsigned n) {
  std::optional<AlphaResult> result = alphaAttempt(s, n);
  if (!result) {
    throw InsufficientSteps("alpha: g(1) enclosure contains zero at step " + std::to_string(s.m),
                            s.m + 1);
  }
  if (unitInLastPlace(n) < result->errorBound) {
    throw InsufficientSteps("alpha: step " + std::to_string(s.m) + " certifies only " +
                                result->errorBound.str() + ", more than 10^-" + std::to_string(n),
                            nextTarget(s.m, result->errorBound, n));
  }
  return std::move(*result);
}

std::vector<TaylorCoefficient> taylor(const IterationState& s, std::size_t k, unsigned n) {
  std::vector<TaylorCoefficient> out = taylorAttempt(s, k, n);
  for (const TaylorCoefficient& c : out) {
    if (unitInLastPlace(n) < c.errorBound) {
      throw InsufficientSteps("taylor: step " + std::to_string(s.m) + " certifies a_" +
                                  std::to_string(c.index) + " only to " + c.errorBound.str(),
                              nextTarget(s.m, c.errorBound, n));
    }
  }
  return out;
}

std::pair<IterationState, AlphaResult> certifyAlpha(IterationState s, unsigned n,
                                                    const RunOptions& options) {
  for (;;) {
    std::optional<AlphaResult> result = alphaAttempt(s, n);
    if (result && !(unitInLastPlace(n) < result->errorBound)) {
      if (options.checkpoint) saveCheckpoint(s, *options.checkpoint);
      return {std::move(s), std::move(*result)};
    }
    const std::size_t target = result ? nextTarget(s.m, result->errorBound, n) : s.m + 1;
    s = advance(std::move(s), target, options);
    if (s.m < target) throw InsufficientSteps("alpha: run stopped at step " + std::to_string(s.m), target);
  }
}

std::pair<IterationState, std::vector<TaylorCoefficient>> certifyTaylor(
    IterationState s, std::size_t k, unsigned n, const RunOptions& options) {
  for (;;) {
    std::vector<TaylorCoefficient> out = taylorAttempt(s, k, n);
    FixedDec worst;
    for (const TaylorCoefficient& c : out) worst = max(worst, c.errorBound);
    if (!(unitInLastPlace(n) < worst)) {
      if (options.checkpoint) saveCheckpoint(s, *options.checkpoint);
      return {std::move(s), std::move(out)};
    }
    const std::size_t target = nextTarget(s.m, worst, n);
    s = advance(std::move(s), target, options);
    if (s.m < target) throw InsufficientSteps("taylor: run stopped at step " + std::to_string(s.m), target);
  }
}

}  // namespace feigencert
