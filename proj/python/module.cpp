#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "feigencert/driver.hpp"
#include "feigencert/verify.hpp"

namespace py = pybind11;
using namespace feigencert;

namespace {

std::pair<IterationState, std::optional<std::filesystem::path>> start(
    const std::optional<std::filesystem::path>& checkpoint) {
  if (checkpoint && std::filesystem::exists(*checkpoint)) return {loadCheckpoint(*checkpoint), checkpoint};
  return {initialState(), checkpoint};
}

RunOptions options(const std::optional<std::filesystem::path>& checkpoint, std::size_t every) {
  RunOptions o;
  o.checkpoint = checkpoint;
  o.checkpointEvery = every;
  return o;
}

py::dict alphaDict(const AlphaResult& a) {
  py::dict d;
  d["value"] = a.value.str();
  d["error_bound"] = a.errorBound.str();
  d["enclosure"] = py::make_tuple(a.enclosure.lo().str(), a.enclosure.hi().str());
  d["m"] = a.mUsed;
  return d;
}

std::vector<std::string> strings(std::span<const std::string_view> v) {
  return {v.begin(), v.end()};
}

py::dict stateDict(const IterationState& s) {
  py::dict d;
  d["m"] = s.m;
  d["scale"] = stateScale(s.m);
  d["u"] = s.coords.u().str();
  py::list nu;
  for (const FixedDec& v : s.coords.nu()) nu.append(v.str());
  d["nu"] = nu;
  d["bound"] = s.certifiedBound().str();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Certified computation of the period-doubling fixed point";

  py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_ValueError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);

  m.def(
      "alpha",
      [](unsigned n, std::optional<std::filesystem::path> checkpoint) {
        if (n == 0) throw py::value_error("n must be positive");
        AlphaResult a;
        {
          py::gil_scoped_release release;
          auto [s0, path] = start(checkpoint);
          a = certifyAlpha(std::move(s0), n, options(path, 25)).second;
        }
        return alphaDict(a);
      },
      py::arg("n"), py::arg("checkpoint") = py::none());

  m.def(
      "taylor",
      [](std::size_t k, unsigned n, std::optional<std::filesystem::path> checkpoint) {
        if (k == 0 || n == 0) throw py::value_error("k and n must be positive");
        std::pair<IterationState, std::vector<TaylorCoefficient>> r;
        {
          py::gil_scoped_release release;
          auto [s0, path] = start(checkpoint);
          r = certifyTaylor(std::move(s0), k, n, options(path, 25));
        }
        py::list out;
        for (const TaylorCoefficient& t : r.second) {
          py::dict d;
          d["i"] = t.index;
          d["value"] = t.value.str();
          d["error_bound"] = t.errorBound.str();
          out.append(d);
        }
        return out;
      },
      py::arg("k"), py::arg("n"), py::arg("checkpoint") = py::none());

  m.def(
      "run",
      [](std::size_t steps, std::optional<std::filesystem::path> checkpoint, bool resume, std::size_t every) {
        IterationState s;
        {
          py::gil_scoped_release release;
          s = resume && checkpoint ? loadCheckpoint(*checkpoint) : initialState();
          s = advance(std::move(s), resume ? s.m + steps : steps, options(checkpoint, every));
        }
        return stateDict(s);
      },
      py::arg("steps"), py::arg("checkpoint") = py::none(), py::arg("resume") = false,
      py::arg("every") = 25);

  m.def("steps_for_precision", &stepsForPrecision, py::arg("n"));

  m.def(
      "verify_json",
      [](const std::string& suite, std::uint64_t seed, std::size_t samples, std::size_t step) {
        SuiteOptions o;
        o.seed = seed;
        o.samples = samples;
        o.m = step;
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = runSuite(suite, o);
        }
        return toJson(r).dump();
      },
      py::arg("suite") = "all", py::arg("seed") = 42, py::arg("samples") = 100, py::arg("m") = 50);

  m.def("suite_names", [] { return strings(suiteNames()); });

  m.def("constants", [] {
    const DecayConstants& k = decayConstants();
    py::dict d;
    d["psi0"] = strings(psi0Table());
    d["j_scaling"] = jScaling().str();
    d["w_scaling"] = wScaling().str();
    d["decay_C"] = k.C.get_str();
    d["decay_ratio"] = k.ratio.get_str();
    d["decay_tail_factor"] = k.tailFactor.get_str();
    return d;
  });
}
