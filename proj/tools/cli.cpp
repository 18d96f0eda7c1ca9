#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include "feigencert/driver.hpp"
#include "feigencert/verify.hpp"
#include "json.hpp"

namespace feigencert::cli {

namespace {

using nlohmann::json;

struct Config {
  std::string format = "plain";
  bool jsonFlag = false;
  bool verbose = false;
  unsigned digits = 0;
  std::size_t order = 0;
  std::optional<std::size_t> steps;
  std::string checkpoint;
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  std::size_t step = 50;
  std::size_t every = 25;

  bool json() const { return jsonFlag || format == "json"; }
};

std::filesystem::path defaultCheckpoint() {
  const char* dir = std::getenv(kCheckpointDirVariable);
  return std::filesystem::path(dir && *dir ? dir : ".") / "feigencert.ckpt";
}

json header(std::string_view command) {
  return json{{"schema_version", kJsonSchemaVersion}, {"command", command}};
}

RunOptions runOptions(const Config& c, std::optional<std::filesystem::path> checkpoint,
                      std::ostream& err) {
  RunOptions options;
  options.checkpoint = std::move(checkpoint);
  options.checkpointEvery = c.every;
  if (c.verbose) {
    options.onStep = [&err](const IterationState& s, const StepReport& r) {
      err << "step " << s.m << ": work scale " << r.workScale << ", retries " << r.retries
          << ", worst rounding " << brief(r.worstError) << '\n';
      return true;
    };
  }
  return options;
}

IterationState startingState(const std::string& checkpoint) {
  if (!checkpoint.empty() && std::filesystem::exists(checkpoint)) return loadCheckpoint(checkpoint);
  return initialState();
}

std::optional<std::filesystem::path> optionalPath(const std::string& p) {
  if (p.empty()) return std::nullopt;
  return std::filesystem::path(p);
}

int cmdAlpha(const Config& c, std::ostream& out, std::ostream& err) {
  auto [state, a] = certifyAlpha(startingState(c.checkpoint), c.digits,
                                 runOptions(c, optionalPath(c.checkpoint), err));
  if (c.json()) {
    json doc = header("alpha");
    doc["digits"] = c.digits;
    doc["value"] = a.value.str();
    doc["error_bound"] = a.errorBound.str();
    doc["m"] = a.mUsed;
    doc["distance_to_fixed_point"] = brief(a.radius, 6);
    out << doc.dump(2) << '\n';
  } else {
    out << a.value.str() << '\n';
    out << "error bound " << brief(a.errorBound, 3) << ", m = " << a.mUsed << '\n';
  }
  return kOk;
}

int cmdTaylor(const Config& c, std::ostream& out, std::ostream& err) {
  auto [state, coeffs] = certifyTaylor(startingState(c.checkpoint), c.order, c.digits,
                                       runOptions(c, optionalPath(c.checkpoint), err));
  if (c.json()) {
    json doc = header("taylor");
    doc["digits"] = c.digits;
    doc["order"] = c.order;
    doc["m"] = state.m;
    json list = json::array();
    for (const TaylorCoefficient& t : coeffs) {
      list.push_back({{"i", t.index}, {"value", t.value.str()}, {"error_bound", t.errorBound.str()}});
    }
    doc["coefficients"] = std::move(list);
    out << doc.dump(2) << '\n';
  } else {
    for (const TaylorCoefficient& t : coeffs) {
      out << "a_" << t.index << " = " << t.value.str() << "  +/- " << brief(t.errorBound, 3) << '\n';
    }
    out << "m = " << state.m << '\n';
  }
  return kOk;
}

int cmdVerify(const Config& c, std::ostream& out) {
  SuiteOptions options;
  options.seed = c.seed;
  options.samples = c.samples;
  options.m = c.step;
  const VerificationReport report = runSuite(c.suite, options);
  if (c.json()) {
    json doc = header("verify");
    doc["suite"] = c.suite;
    doc["seed"] = c.seed;
    doc["m"] = c.step;
    doc.update(toJson(report));
    out << doc.dump(2) << '\n';
  } else {
    out << formatTable(report);
  }
  return report.passed() ? kOk : kVerificationFailed;
}

void printState(const Config& c, std::string_view command, const IterationState& s,
                const std::filesystem::path& path, double seconds, std::ostream& out) {
  if (c.json()) {
    json doc = header(command);
    doc["m"] = s.m;
    doc["scale"] = stateScale(s.m);
    doc["coordinates"] = stateCount(s.m);
    doc["checkpoint"] = path.string();
    doc["bound"] = brief(s.certifiedBound(), 6);
    doc["seconds"] = seconds;
    out << doc.dump(2) << '\n';
  } else {
    out << "m = " << s.m << ", scale " << stateScale(s.m) << ", " << stateCount(s.m)
        << " coordinates\n";
    out << "checkpoint " << path.string() << '\n';
    out << "||psi_m - g|| < " << brief(s.certifiedBound()) << ", " << seconds << " s\n";
  }
}

std::filesystem::path checkpointPath(const Config& c) {
  return c.checkpoint.empty() ? defaultCheckpoint() : std::filesystem::path(c.checkpoint);
}

int cmdRun(const Config& c, bool resume, std::ostream& out, std::ostream& err) {
  const std::filesystem::path path = checkpointPath(c);
  const auto started = std::chrono::steady_clock::now();
  IterationState s = resume ? loadCheckpoint(path) : initialState();
  std::size_t target = stepsForPrecision(c.digits);
  if (c.steps) target = resume ? s.m + *c.steps : *c.steps;
  s = advance(std::move(s), std::max(target, s.m), runOptions(c, path, err));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  printState(c, resume ? "resume" : "run", s, path, seconds, out);
  return kOk;
}

int cmdConstants(const Config& c, std::ostream& out) {
  const DecayConstants& d = decayConstants();
  const auto table = psi0Table();
  if (c.json()) {
    json doc = header("constants");
    doc["psi0"] = json{{"u", table[0]}, {"nu", std::vector<std::string>(table.begin() + 1, table.end())}};
    doc["j_scaling"] = jScaling().str();
    doc["w_scaling"] = wScaling().str();
    doc["decay"] = json{{"C", d.C.get_str()}, {"ratio", d.ratio.get_str()},
                        {"tail_factor", d.tailFactor.get_str()}};
    doc["bound"] = "0.01 * 0.93^m";
    doc["state_scale"] = "41 + m";
    doc["state_coordinates"] = "10 + m";
    out << doc.dump(2) << '\n';
  } else {
    out << "psi_0 coordinates (41 fractional digits)\n";
    out << "  u    = " << table[0] << '\n';
    for (std::size_t i = 1; i < table.size(); ++i) {
      out << "  nu_" << i << " = " << table[i] << '\n';
    }
    out << "J scaling " << jScaling().str() << ", w = (z^2 - 1)/" << wScaling().str() << '\n';
    out << "decay |nu_i(g)| <= " << d.C.get_str() << " (" << d.ratio.get_str() << ")^i, tail factor "
        << d.tailFactor.get_str() << '\n';
    out << "||psi_m - g|| < 0.01 * 0.93^m, scale 41 + m, 10 + m coordinates\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Certified digits of the Feigenbaum fixed point and alpha", "feigencert"};
  app.require_subcommand(1);
  auto* format = app.add_option("--format", c.format, "Output format")
                     ->check(CLI::IsMember({"plain", "json"}))
                     ->capture_default_str();
  app.add_flag("--json", c.jsonFlag, "Same as --format json")->excludes(format);
  app.add_flag("-v,--verbose", c.verbose, "Report each step on stderr");

  auto digits = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("-n,--digits", c.digits, "Decimal digits")->check(CLI::Range(1u, 100000u));
    if (required) o->required();
    return o;
  };
  auto checkpoint = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--checkpoint", c.checkpoint, help);
  };

  auto* alpha = app.add_subcommand("alpha", "Print alpha = 1/g(1) to n certified decimals");
  digits(alpha, true);
  checkpoint(alpha, "Resume from and save to this checkpoint");

  auto* taylor = app.add_subcommand("taylor", "Print Taylor coefficients a_1..a_k of g");
  digits(taylor, true);
  taylor->add_option("-k,--order", c.order, "Number of coefficients")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  checkpoint(taylor, "Resume from and save to this checkpoint");

  auto* verify = app.add_subcommand("verify", "Run verification checks");
  std::vector<std::string> suites;
  for (std::string_view s : suiteNames()) suites.emplace_back(s);
  verify->add_option("--suite", c.suite, "Suite to run")->check(CLI::IsMember(suites))->capture_default_str();
  verify->add_option("--seed", c.seed, "Seed for random probes")->capture_default_str();
  verify->add_option("--samples", c.samples, "Pairs in the contraction probe")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  verify->add_option("-m,--step", c.step, "Iteration step the checks use")->capture_default_str();

  auto stepping = [&](CLI::App* sub) {
    auto* n = digits(sub, false);
    auto* steps = sub->add_option("--steps", c.steps, "Number of steps");
    n->excludes(steps);
    sub->add_option("--every", c.every, "Checkpoint every this many steps")->capture_default_str();
    checkpoint(sub, std::string("Checkpoint file (default $") + kCheckpointDirVariable +
                        "/feigencert.ckpt)");
  };
  auto* runCmd = app.add_subcommand("run", "Iterate from psi_0 and checkpoint the state");
  stepping(runCmd);
  runCmd->get_option("--steps")->description("Steps to take from psi_0");
  auto* resume = app.add_subcommand("resume", "Continue from a checkpoint");
  stepping(resume);
  resume->get_option("--steps")->description("Additional steps");
  resume->get_option("--digits")->description("Continue until the run for n digits is complete");

  auto* constants = app.add_subcommand("constants", "Print psi_0 and the fixed constants");

  for (CLI::App* sub : {alpha, taylor, verify, runCmd, resume, constants}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (CLI::App* sub : {runCmd, resume}) {
    if (sub->parsed() && !c.steps && c.digits == 0) {
      err << sub->get_name() << ": one of -n/--digits or --steps is required\n";
      return kUsage;
    }
  }

  try {
    if (alpha->parsed()) return cmdAlpha(c, out, err);
    if (taylor->parsed()) return cmdTaylor(c, out, err);
    if (verify->parsed()) return cmdVerify(c, out);
    if (runCmd->parsed()) return cmdRun(c, false, out, err);
    if (resume->parsed()) return cmdRun(c, true, out, err);
    if (constants->parsed()) return cmdConstants(c, out);
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kCorruptCheckpoint;
  } catch (const CertificationError& e) {
    err << "certification failure: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kCertificationFailure;
  }
  return kUsage;
}

}  // namespace feigencert::cli
