#pragma once

// The iteration psi_0 -> psi_1 -> ... and extraction of alpha and the Taylor
// coefficients of g with certified error bounds.
//
// State m holds u^(m), nu_1^(m)..nu_{9+m}^(m), every one a decimal numeral
// with at most two integer digits and exactly 41+m fractional digits. The
// distance to the fixed point g is trusted to satisfy
//
//   ||psi_m - g|| < B_m = 0.01 * 0.93^m,
//
// which is the induction hypothesis the iteration is built around; every
// bound reported below is derived from B_m plus exactly tracked rounding.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "feigencert/decfix.hpp"
#include "feigencert/lanford.hpp"

namespace feigencert {

/// A Central Step could not certify its coefficients even after widening the
/// working precision.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The state is not far enough along for the requested output precision.
class InsufficientSteps : public std::runtime_error {
 public:
  InsufficientSteps(const std::string& what, std::size_t needed)
      : std::runtime_error(what), needed_(needed) {}
  /// Estimated step at which the request would certify.
  std::size_t stepsNeeded() const { return needed_; }

 private:
  std::size_t needed_;
};

/// Malformed or tampered checkpoint.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fractional digits carried by state m.
constexpr Scale stateScale(std::size_t m) { return 41 + m; }
/// Number of coordinates (u plus nu's) carried by state m.
constexpr std::size_t stateCount(std::size_t m) { return 10 + m; }

/// B_m = 0.01 * 0.93^m = 93^m * 10^-(2m+2), exact.
FixedDec propertyTwoBound(std::size_t m);

struct IterationState {
  std::size_t m = 0;
  LanfordCoords coords;

  FixedDec certifiedBound() const { return propertyTwoBound(m); }
};

/// Throws std::logic_error if the state violates the scale or count law or
/// a coefficient has more than two integer digits.
void checkPropertyOne(const IterationState& s);

IterationState initialState();

struct StepReport {
  Scale workScale = 0;
  int retries = 0;
  /// Largest |rounded - x| over all x in any coefficient enclosure.
  FixedDec worstError;
};

/// Guard digits used on the first attempt of step m -> m+1.
std::size_t defaultGuardDigits(std::size_t m);

/// One Central Step: apply Phi at a guarded working scale keeping v and
/// mu_1..mu_{10+m}, certify that every enclosure lies within 10^-(42+m) of
/// its rounded midpoint, and round to scale 42+m. On certification failure
/// the guard digits are doubled; after `maxRetries` doublings a
/// CertificationError is thrown.
IterationState centralStep(const IterationState& s, StepReport* report = nullptr,
                           int maxRetries = 6);

/// Least m with B_m <= target, decided in exact arithmetic.
std::size_t leastStepsForBound(const FixedDec& target);
/// Least m with 0.01 * 0.93^m <= 10^-n.
std::size_t stepsForPrecision(unsigned n);

/// Checks (10+m+1) 10^-(41+m+1) <= 10^-5 0.93^m and
/// 31/4 (5/13)^(10+m+1) <= 2.5 10^-4 0.93^m for all m < horizon, exactly.
bool errorChainHolds(std::size_t horizon);

struct RunOptions {
  /// Written every `checkpointEvery` steps and at the end, when set.
  std::optional<std::filesystem::path> checkpoint;
  std::size_t checkpointEvery = 25;
  /// Called after every step; returning false stops the run early.
  std::function<bool(const IterationState&, const StepReport&)> onStep;
};

/// Advances `s` until it reaches step `targetM`.
IterationState advance(IterationState s, std::size_t targetM, const RunOptions& options = {});
/// advance(initialState(), stepsForPrecision(n)).
IterationState run(unsigned n, const RunOptions& options = {});

/// Bound on ||psi_m - g|| from the trusted contraction constant 0.9 of Phi on
/// the 0.009-ball around psi_0: ||Phi psi - psi|| / (1 - 0.9), certified by
/// interval arithmetic. Empty unless that ball lies inside the 0.009-ball.
std::optional<FixedDec> contractionRadius(const IterationState& s);
/// min(B_m, contractionRadius(s)).
FixedDec distanceToFixedPoint(const IterationState& s);

struct AlphaResult {
  FixedDec value;       // n fractional digits
  FixedDec errorBound;  // |value - alpha| <= errorBound <= 10^-n
  DecInterval enclosure;
  std::size_t mUsed = 0;
  FixedDec radius;  // the bound on ||psi_m - g|| used
};

/// alpha = 1/g(1) with g(1) = 1 - u^(inf)/10 and |u^(m) - u^(inf)| <= r,
/// r = distanceToFixedPoint(s). Throws InsufficientSteps if the certified
/// bound exceeds 10^-n.
AlphaResult alpha(const IterationState& s, unsigned n);

struct TaylorCoefficient {
  std::size_t index = 0;  // a_index multiplies z^(2 index)
  FixedDec value;
  FixedDec errorBound;
  DecInterval enclosure;
};

/// a_1..a_k of g(z) = 1 + sum a_j z^(2j), each within 10^-n.
std::vector<TaylorCoefficient> taylor(const IterationState& s, std::size_t k, unsigned n);

/// Advances `s` until alpha(s, n) certifies and returns the final state.
std::pair<IterationState, AlphaResult> certifyAlpha(IterationState s, unsigned n,
                                                    const RunOptions& options = {});
/// Advances `s` until taylor(s, k, n) certifies.
std::pair<IterationState, std::vector<TaylorCoefficient>> certifyTaylor(
    IterationState s, std::size_t k, unsigned n, const RunOptions& options = {});

// Checkpoints: a header line, one coefficient per line as a signed numeral
// with two integer digits and 41+m fractional digits, and a CRC-32 line.
std::string formatCheckpoint(const IterationState& s);
/// Throws CheckpointError on any format or checksum violation.
IterationState parseCheckpoint(std::string_view text);
void saveCheckpoint(const IterationState& s, const std::filesystem::path& path);
IterationState loadCheckpoint(const std::filesystem::path& path);

}  // namespace feigencert
