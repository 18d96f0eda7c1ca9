#pragma once

// Checks of the claims the computation rests on: the starting-point defect
// ||Phi(psi_0) - psi_0||, the contraction of Phi near psi_0, decay of the
// coordinates, the functional equation g = Tg, and g being in the domain of
// T. Every check is pure: states are taken by const reference.
//
// Two constants are trusted rather than re-derived: ||D Phi|| < 0.9 on the
// ball of radius 0.009 around psi_0, and the decay bound on nu_i of g.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feigencert/decfix.hpp"
#include "feigencert/driver.hpp"
#include "json.hpp"

namespace feigencert {

/// |nu_i(g)| <= C ratio^i, and sum_{i>=k} C ratio^i = tailFactor ratio^k.
struct DecayConstants {
  mpq_class C{62, 13};
  mpq_class ratio{5, 13};
  mpq_class tailFactor{31, 4};

  mpq_class bound(std::size_t i) const;
  mpq_class tailFrom(std::size_t k) const;
};

const DecayConstants& decayConstants();

/// Interval-backed checks are certificates; sampled ones are probes.
enum class CheckMode { Certified, Sampled };

struct CheckResult {
  std::string name;
  bool passed = false;
  FixedDec measured;
  FixedDec bound;
  /// Distance to failure; negative when the check fails.
  FixedDec margin;
  CheckMode mode = CheckMode::Certified;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  void append(const VerificationReport& other);
  /// Sorted by check name, stable for equal names.
  void sortByName();
};

/// Scientific rendering with `digits` significant digits, e.g. 5.855e-05.
std::string brief(const FixedDec& x, int digits = 4);

std::string formatTable(const VerificationReport& report);
nlohmann::json toJson(const CheckResult& check);
nlohmann::json toJson(const VerificationReport& report);

/// Certified enclosure of ||Phi(psi_0) - psi_0|| keeping `order` coordinates.
struct PhiDefect {
  FixedDec lower;
  FixedDec upper;
};
PhiDefect phiDefect(const LanfordCoords& c, std::size_t order, Scale workScale);

/// Compares ||Phi(psi_0) - psi_0|| against 4e-6 at orders 30 and 60.
VerificationReport reproducePhiPsi0Bound();

/// Random distinct pairs in the 0.009-ball around psi_0; each pair must
/// satisfy ||Phi psi - Phi psi'|| <= 0.9 ||psi - psi'|| (certified upper
/// bound on the left side, exact right side).
VerificationReport contractionProbe(std::size_t samples, std::uint64_t seed);

/// |nu_i| <= C ratio^i + B_m for every stored i, in exact rationals.
VerificationReport decayCheck(const IterationState& s);

/// ||T psi_m - psi_m|| <= 0.07 * 0.93^m (certified upper endpoint).
VerificationReport residualDecay(const IterationState& s);

/// Encloses g(z) for all z in `z` given ||psi - g|| <= radius. Needs |w| <= 1
/// on z, i.e. |z| <= sqrt(3.5).
DecInterval enclosePsiNeighbourhood(const LanfordCoords& c, const FixedDec& radius,
                                    const DecInterval& z, Scale workScale);

struct FunctionalEquationPoint {
  FixedDec x;
  /// psi(x) - psi(psi(psi(1) x)) / psi(1) for psi = psi_m itself.
  DecInterval psiResidual;
  /// The same expression for every g within `radius` of psi_m.
  DecInterval gResidual;
};
FunctionalEquationPoint functionalEquationAt(const IterationState& s, const FixedDec& x,
                                             const FixedDec& radius, Scale workScale);

/// Per point: the g enclosure contains 0 and |psi residual| stays within
/// 2 (3.669 + 1) B_m plus the enclosure width.
VerificationReport functionalEquationResidual(const IterationState& s,
                                              std::span<const FixedDec> points);
/// 0, 0.1, ..., 1.
std::vector<FixedDec> defaultResidualPoints();

/// 0 < -g(1), -g(1) < g(g(1)), g(g(g(1))) <= -g(1), plus a sampled check that
/// g decreases along 50 grid points of [0, 1].
VerificationReport dMembership(const IterationState& s);

/// alpha and a_1..a_3 from run(n) and from n + extra digits agree within
/// 2 10^-n; the run(n) state survives a checkpoint round trip.
VerificationReport selfConsistency(unsigned n, unsigned extra);

/// Named suites: lemma, contraction, decay, residual, functional, membership,
/// consistency, all. Checks needing a state use step `m`.
struct SuiteOptions {
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  std::size_t m = 50;
  unsigned consistencyDigits = 8;
  unsigned consistencyExtra = 4;
};
std::span<const std::string_view> suiteNames();
/// Throws std::invalid_argument for an unknown suite name.
VerificationReport runSuite(std::string_view suite, const SuiteOptions& options = {});

}  // namespace feigencert
