#include "feigencert/verify.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace feigencert {

namespace {

mpq_class toRational(const FixedDec& x) {
  mpq_class q(x.units(), powerOfTen(x.scale()));
  q.canonicalize();
  return q;
}

FixedDec fromRational(const mpq_class& q, Scale scale, Rounding mode) {
  return divRound(FixedDec(q.get_num(), 0), FixedDec(q.get_den(), 0), scale, mode);
}

const FixedDec& dec(std::string_view text) {
  static std::mutex mutex;
  static std::map<std::string_view, FixedDec> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(text);
  if (it == cache.end()) it = cache.emplace(text, FixedDec::parse(text)).first;
  return it->second;
}

CheckResult upperCheck(std::string name, FixedDec measured, FixedDec bound,
                       CheckMode mode = CheckMode::Certified, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.margin = bound - measured;
  r.passed = r.margin.signum() >= 0;
  r.measured = std::move(measured);
  r.bound = std::move(bound);
  r.mode = mode;
  r.detail = std::move(detail);
  return r;
}

// Same as upperCheck but the inequality is strict.
CheckResult strictCheck(std::string name, FixedDec measured, FixedDec bound,
                        CheckMode mode = CheckMode::Certified, std::string detail = {}) {
  CheckResult r = upperCheck(std::move(name), std::move(measured), std::move(bound), mode,
                             std::move(detail));
  r.passed = r.margin.signum() > 0;
  return r;
}

std::string bracket(const DecInterval& x) { return "[" + brief(x.lo(), 12) + ", " + brief(x.hi(), 12) + "]"; }

LanfordCoords padded(const LanfordCoords& c, std::size_t count) {
  std::vector<FixedDec> nu(c.nu().begin(), c.nu().end());
  nu.resize(std::max(count, nu.size()), FixedDec(mpz_class(0), c.scale()));
  return LanfordCoords(c.u(), std::move(nu));
}

}  // namespace

mpq_class DecayConstants::bound(std::size_t i) const {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), ratio.get_num_mpz_t(), i);
  mpz_pow_ui(den.get_mpz_t(), ratio.get_den_mpz_t(), i);
  mpq_class power(num, den);
  power.canonicalize();
  return C * power;
}

mpq_class DecayConstants::tailFrom(std::size_t k) const {
  return tailFactor * (bound(k) / C);
}

const DecayConstants& decayConstants() {
  static const DecayConstants constants;
  return constants;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void VerificationReport::sortByName() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

std::string brief(const FixedDec& x, int digits) {
  if (x.isZero()) return "0";
  mpf_class value(x.units(), 64 + 4 * static_cast<mp_bitcnt_t>(x.scale()));
  mpf_class divisor(powerOfTen(x.scale()), value.get_prec());
  value /= divisor;
  char buffer[64];
  gmp_snprintf(buffer, sizeof buffer, "%.*Fe", std::max(digits - 1, 0), value.get_mpf_t());
  return buffer;
}

std::string formatTable(const VerificationReport& report) {
  std::size_t width = 5;
  for (const CheckResult& c : report.checks) width = std::max(width, c.name.size());
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-6s %-9s %-*s %12s %12s %12s\n", "status", "mode",
                static_cast<int>(width), "check", "measured", "bound", "margin");
  out << line;
  for (const CheckResult& c : report.checks) {
    std::snprintf(line, sizeof line, "%-6s %-9s %-*s %12s %12s %12s\n", c.passed ? "PASS" : "FAIL",
                  c.mode == CheckMode::Certified ? "certified" : "sampled", static_cast<int>(width),
                  c.name.c_str(), brief(c.measured).c_str(), brief(c.bound).c_str(),
                  brief(c.margin).c_str());
    out << line;
    if (!c.detail.empty()) out << "       " << c.detail << '\n';
  }
  out << (report.passed() ? "all checks passed" : "some checks FAILED") << '\n';
  return out.str();
}

nlohmann::json toJson(const CheckResult& check) {
  return nlohmann::json{{"name", check.name},
                        {"status", check.passed ? "pass" : "fail"},
                        {"measured", brief(check.measured, 12)},
                        {"bound", brief(check.bound, 12)},
                        {"margin", brief(check.margin, 12)},
                        {"mode", check.mode == CheckMode::Certified ? "certified" : "sampled"},
                        {"detail", check.detail}};
}

nlohmann::json toJson(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : report.checks) checks.push_back(toJson(c));
  return nlohmann::json{{"passed", report.passed()}, {"checks", std::move(checks)}};
}

PhiDefect phiDefect(const LanfordCoords& c, std::size_t order, Scale workScale) {
  const IntervalCoords phi = applyPhi(c, order, workScale, true);
  return PhiDefect{distanceLower(phi, c), distanceUpper(phi, c)};
}

VerificationReport reproducePhiPsi0Bound() {
  const LanfordCoords start = psi0();
  Scale workScale = 60;
  PhiDefect at30, at60;
  // Escalate until the enclosure is a thousand times tighter than its size.
  for (int attempt = 0; attempt < 4; ++attempt, workScale *= 2) {
    at30 = phiDefect(start, 30, workScale);
    at60 = phiDefect(start, 60, workScale);
    if (!(at60.upper.isZero()) && (at60.upper - at60.lower) * FixedDec(1000) <= at60.upper) break;
  }
  VerificationReport report;
  report.checks.push_back(strictCheck("lemma: ||Phi(psi0) - psi0|| < 4e-6", at60.upper, dec("0.000004"),
                                      CheckMode::Certified,
                                      "enclosure [" + brief(at60.lower, 8) + ", " +
                                          brief(at60.upper, 8) + "] at order 60"));
  report.checks.push_back(strictCheck("lemma: psi0 is not exactly fixed", FixedDec(), at60.lower,
                                      CheckMode::Certified, "lower endpoint " + brief(at60.lower, 8)));
  report.checks.push_back(upperCheck("lemma: order 30 vs 60 agree", (at30.upper - at60.upper).abs(),
                                     roundToScale(at60.upper * dec("0.001"), workScale, Rounding::Down),
                                     CheckMode::Certified,
                                     "upper endpoints " + brief(at30.upper, 10) + " and " +
                                         brief(at60.upper, 10)));
  return report;
}

VerificationReport contractionProbe(std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("contractionProbe: samples must be at least 1");
  constexpr std::size_t kPerturbed = 12;  // u and nu_1..nu_11
  constexpr std::size_t kOrder = 30;
  constexpr Scale kWorkScale = 50;
  const LanfordCoords centre = padded(psi0(), kPerturbed - 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> radius(1, 1000000);
  std::uniform_int_distribution<long> direction(-1000000, 1000000);

  // Each coordinate moves by at most 0.00075, so the l1 offset is <= 0.009.
  auto sample = [&] {
    const long rho = radius(rng);
    auto offset = [&] { return FixedDec(mpz_class(75) * rho * direction(rng), 17); };
    FixedDec u = centre.u() + offset();
    std::vector<FixedDec> nu;
    for (const FixedDec& v : centre.nu()) nu.push_back(v + offset());
    return LanfordCoords(std::move(u), std::move(nu));
  };

  FixedDec worstRatio;
  std::size_t violations = 0;
  std::size_t tested = 0;
  std::string firstViolation;
  while (tested < samples) {
    const LanfordCoords a = sample();
    const LanfordCoords b = sample();
    const FixedDec gap = distance(a, b);
    if (gap.isZero()) continue;
    ++tested;
    const FixedDec image = distanceUpper(applyPhi(a, kOrder, kWorkScale, true),
                                         applyPhi(b, kOrder, kWorkScale, true));
    const FixedDec ratio = divRound(image, gap, 12, Rounding::Up);
    if (worstRatio < ratio) worstRatio = ratio;
    if (dec("0.9") * gap < image) {
      if (violations++ == 0) firstViolation = "first violation at pair " + std::to_string(tested);
    }
  }
  VerificationReport report;
  CheckResult r = upperCheck("contraction: ||Phi a - Phi b|| <= 0.9 ||a - b||", worstRatio, dec("0.9"),
                             CheckMode::Sampled,
                             std::to_string(tested) + " pairs, seed " + std::to_string(seed) + ", " +
                                 std::to_string(violations) + " violations" +
                                 (firstViolation.empty() ? "" : "; " + firstViolation));
  r.passed = violations == 0;
  report.checks.push_back(std::move(r));
  return report;
}

VerificationReport decayCheck(const IterationState& s) {
  const DecayConstants& k = decayConstants();
  const mpq_class slack = toRational(s.certifiedBound());
  std::size_t worst = 0;
  mpq_class worstShare = -1;
  std::size_t failures = 0;
  for (std::size_t i = 1; i <= s.coords.size(); ++i) {
    const mpq_class value = toRational(s.coords.nuAt(i).abs());
    const mpq_class bound = k.bound(i) + slack;
    if (value > bound) ++failures;
    const mpq_class share = value / bound;
    if (share > worstShare) {
      worstShare = share;
      worst = i;
    }
  }
  VerificationReport report;
  const mpq_class bound = k.bound(worst) + slack;
  const FixedDec measured = s.coords.nuAt(worst).abs();
  const FixedDec rounded = fromRational(bound, measured.scale() + 4, Rounding::Down);
  CheckResult r = upperCheck("decay: |nu_i| <= 62/13 (5/13)^i + B_m", measured, rounded,
                             CheckMode::Certified,
                             "m = " + std::to_string(s.m) + ", " + std::to_string(s.coords.size()) +
                                 " coordinates, tightest at i = " + std::to_string(worst) + ", " +
                                 std::to_string(failures) + " violations");
  r.passed = failures == 0;
  report.checks.push_back(std::move(r));
  return report;
}

VerificationReport residualDecay(const IterationState& s) {
  const Scale workScale = s.coords.scale() + 10;
  const IntervalCoords t = applyT(s.coords, s.coords.size(), workScale, true);
  const FixedDec measured = distanceUpper(t, s.coords);
  const FixedDec bound = s.certifiedBound() * FixedDec(7);
  VerificationReport report;
  report.checks.push_back(upperCheck("residual: ||T psi_m - psi_m|| <= 0.07 0.93^m (m = " +
                                         std::to_string(s.m) + ")",
                                     measured, bound));
  return report;
}

DecInterval enclosePsiNeighbourhood(const LanfordCoords& c, const FixedDec& radius,
                                    const DecInterval& z, Scale workScale) {
  const DecInterval value = evalPsi(c, z, workScale);
  if (radius.isZero()) return value;
  const DecInterval z2 = iPowInt(z, 2, workScale);
  const DecInterval w = iMul(iSub(z2, DecInterval(FixedDec(1)), workScale), dec("0.4"), workScale);
  const FixedDec wMax = w.magnitude();
  if (FixedDec(1) < wMax) {
    throw std::domain_error("enclosePsiNeighbourhood: |w| exceeds 1 on " + bracket(z));
  }
  // |psi(z) - g(z)| <= |z|^2 (|du|/10 + sum |dnu_i| |w|^i) <= |z|^2 max(0.1, |w|) ||psi - g||.
  const FixedDec spread = z2.magnitude() * max(dec("0.1"), wMax) * radius;
  return roundOutward(DecInterval(value.lo() - spread, value.hi() + spread), workScale);
}

FunctionalEquationPoint functionalEquationAt(const IterationState& s, const FixedDec& x,
                                             const FixedDec& radius, Scale workScale) {
  auto residual = [&](const FixedDec& r) {
    auto g = [&](const DecInterval& z) { return enclosePsiNeighbourhood(s.coords, r, z, workScale); };
    const DecInterval g1 = g(DecInterval(FixedDec(1)));
    const DecInterval inner = g(g(iMul(g1, x, workScale)));
    return iSub(g(DecInterval(x)), iDivScalar(inner, g1, workScale), workScale);
  };
  return FunctionalEquationPoint{x, residual(FixedDec()), residual(radius)};
}

std::vector<FixedDec> defaultResidualPoints() {
  std::vector<FixedDec> points;
  for (long i = 0; i <= 10; ++i) points.emplace_back(mpz_class(i), 1);
  return points;
}

VerificationReport functionalEquationResidual(const IterationState& s,
                                              std::span<const FixedDec> points) {
  const FixedDec radius = distanceToFixedPoint(s);
  const FixedDec budget = dec("9.338") * s.certifiedBound();  // 2 (3.669 + 1) B_m
  const Scale workScale = s.coords.scale() + 10;
  VerificationReport report;
  for (const FixedDec& x : points) {
    if (FixedDec(1) < x.abs()) {
      throw std::invalid_argument("functionalEquationResidual: point " + x.str() + " outside [-1, 1]");
    }
    const FunctionalEquationPoint p = functionalEquationAt(s, x, radius, workScale);
    CheckResult r = upperCheck("functional equation at x = " + x.str(), p.psiResidual.magnitude(),
                               budget + width(p.psiResidual), CheckMode::Certified,
                               "g residual " + bracket(p.gResidual) + ", width " +
                                   brief(width(p.gResidual)) + ", ||psi - g|| <= " + brief(radius));
    r.passed = r.passed && p.gResidual.containsZero();
    report.checks.push_back(std::move(r));
  }
  return report;
}

VerificationReport dMembership(const IterationState& s) {
  const FixedDec radius = distanceToFixedPoint(s);
  const Scale workScale = s.coords.scale() + 10;
  auto g = [&](const DecInterval& z) { return enclosePsiNeighbourhood(s.coords, radius, z, workScale); };
  const DecInterval g1 = g(DecInterval(FixedDec(1)));
  const DecInterval g2 = g(g1);
  const DecInterval g3 = g(g2);
  const DecInterval minusG1 = -g1;

  VerificationReport report;
  report.checks.push_back(strictCheck("membership: 0 < -g(1)", FixedDec(), minusG1.lo(),
                                      CheckMode::Certified, "g(1) in " + bracket(g1)));
  report.checks.push_back(strictCheck("membership: -g(1) < g(g(1))", minusG1.hi(), g2.lo(),
                                      CheckMode::Certified, "g(g(1)) in " + bracket(g2)));
  report.checks.push_back(upperCheck("membership: g(g(g(1))) <= -g(1)", g3.hi(), minusG1.lo(),
                                     CheckMode::Certified, "g(g(g(1))) in " + bracket(g3)));
  const DecInterval g0 = g(DecInterval(FixedDec(0)));
  CheckResult origin = upperCheck("membership: g(0) = 1", width(g0), FixedDec());
  origin.passed = origin.passed && g0.contains(FixedDec(1));
  report.checks.push_back(std::move(origin));

  // Strict decrease along the grid j/49, j = 0..49.
  constexpr long kPoints = 50;
  std::optional<FixedDec> tightest;
  std::size_t failures = 0;
  DecInterval previous = g0;
  for (long j = 1; j < kPoints; ++j) {
    const DecInterval x(divRound(FixedDec(j), FixedDec(kPoints - 1), workScale, Rounding::Down),
                        divRound(FixedDec(j), FixedDec(kPoints - 1), workScale, Rounding::Up));
    const DecInterval current = g(x);
    const FixedDec drop = previous.lo() - current.hi();
    if (drop.signum() <= 0) ++failures;
    if (!tightest || drop < *tightest) tightest = drop;
    previous = current;
  }
  CheckResult monotone = strictCheck("membership: g decreasing on [0, 1]", FixedDec(), *tightest,
                                     CheckMode::Sampled,
                                     std::to_string(kPoints) + " grid points, " +
                                         std::to_string(failures) + " violations");
  monotone.passed = failures == 0;
  report.checks.push_back(std::move(monotone));
  return report;
}

VerificationReport selfConsistency(unsigned n, unsigned extra) {
  constexpr std::size_t kTaylorOrder = 3;
  const IterationState coarse = run(n);
  const IterationState fine = advance(coarse, stepsForPrecision(n + extra));
  const FixedDec tolerance = unitInLastPlace(n) * FixedDec(2);
  const std::string label = "n = " + std::to_string(n) + " vs " + std::to_string(n + extra);

  VerificationReport report;
  const AlphaResult a = alpha(coarse, n);
  const AlphaResult b = alpha(fine, n + extra);
  report.checks.push_back(upperCheck("consistency: alpha, " + label, (a.value - b.value).abs(),
                                     tolerance, CheckMode::Certified,
                                     a.value.str() + " vs " + b.value.str()));
  const auto ta = taylor(coarse, kTaylorOrder, n);
  const auto tb = taylor(fine, kTaylorOrder, n + extra);
  for (std::size_t j = 0; j < kTaylorOrder; ++j) {
    report.checks.push_back(upperCheck("consistency: a_" + std::to_string(j + 1) + ", " + label,
                                       (ta[j].value - tb[j].value).abs(), tolerance,
                                       CheckMode::Certified,
                                       ta[j].value.str() + " vs " + tb[j].value.str()));
  }
  const std::string text = formatCheckpoint(coarse);
  const IterationState restored = parseCheckpoint(text);
  CheckResult roundTrip = upperCheck("consistency: checkpoint round trip", FixedDec(), FixedDec(),
                                     CheckMode::Certified,
                                     "m = " + std::to_string(coarse.m) + ", " +
                                         std::to_string(text.size()) + " bytes");
  roundTrip.passed = restored.m == coarse.m && restored.coords == coarse.coords &&
                     formatCheckpoint(restored) == text;
  report.checks.push_back(std::move(roundTrip));
  return report;
}

std::span<const std::string_view> suiteNames() {
  static constexpr std::array<std::string_view, 8> names{
      "lemma", "contraction", "decay", "residual", "functional", "membership", "consistency", "all"};
  return names;
}

VerificationReport runSuite(std::string_view suite, const SuiteOptions& options) {
  const auto names = suiteNames();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("unknown verification suite '" + std::string(suite) + "'");
  }
  const bool all = suite == "all";
  auto wants = [&](std::string_view name) { return all || suite == name; };

  // States are computed once, in increasing m, and shared between checks.
  std::map<std::size_t, IterationState> states;
  auto stateAt = [&](std::size_t m) -> const IterationState& {
    auto it = states.lower_bound(m);
    if (it != states.end() && it->first == m) return it->second;
    IterationState from = it == states.begin() ? initialState() : std::prev(it)->second;
    return states.emplace(m, advance(std::move(from), m)).first->second;
  };

  VerificationReport report;
  if (wants("lemma")) report.append(reproducePhiPsi0Bound());
  if (wants("contraction")) report.append(contractionProbe(options.samples, options.seed));
  if (wants("residual")) {
    std::vector<std::size_t> steps{10, 30, options.m};
    std::erase_if(steps, [&](std::size_t m) { return m > options.m; });
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    for (std::size_t m : steps) report.append(residualDecay(stateAt(m)));
  }
  if (wants("decay")) report.append(decayCheck(stateAt(options.m)));
  if (wants("functional")) {
    const auto points = defaultResidualPoints();
    report.append(functionalEquationResidual(stateAt(options.m), points));
  }
  if (wants("membership")) report.append(dMembership(stateAt(options.m)));
  if (wants("consistency")) {
    report.append(selfConsistency(options.consistencyDigits, options.consistencyExtra));
  }
  return report;
}

}  // namespace feigencert
