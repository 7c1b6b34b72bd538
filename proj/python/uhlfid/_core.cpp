#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "uhlfid/bench.hpp"
#include "uhlfid/cli.hpp"
#include "uhlfid/fidelity.hpp"
#include "uhlfid/io.hpp"
#include "uhlfid/verify.hpp"
#include "uhlfid/version.hpp"

namespace py = pybind11;
using namespace uhlfid;

namespace {

FidelityMethod to_method(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw py::value_error("unknown method '" + name + "'");
  return *m;
}

py::object json_to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uhlmann-Jozsa fidelity of density matrices";
  m.attr("__version__") = std::string(version());

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<HermiticityError>(m, "HermiticityError", base);
  py::register_exception<NegativityError>(m, "NegativityError", base);
  py::register_exception<TraceError>(m, "TraceError", base);
  py::register_exception<ZeroVectorError>(m, "ZeroVectorError", base);
  py::register_exception<UnitarityError>(m, "UnitarityError", base);
  py::register_exception<RankError>(m, "RankError", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
  py::register_exception<SpectrumError>(m, "SpectrumError", base);
  py::register_exception<ClockError>(m, "ClockError", base);
  py::register_exception<ReproducibilityError>(m, "ReproducibilityError", base);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_property_readonly("mat", [](const DensityMatrix& d) { return d.mat(); })
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("rank_estimate", &DensityMatrix::rank_estimate)
      .def_property_readonly("validation_tol", &DensityMatrix::validation_tol)
      .def("__repr__", [](const DensityMatrix& d) {
        return "<DensityMatrix dim=" + std::to_string(d.dim()) + " rank=" + std::to_string(d.rank_estimate()) + ">";
      });

  m.def("validate", &validate, py::arg("a"), py::arg("tol") = kDefaultTol);
  m.def("pure_state", &pure_state, py::arg("v"));
  m.def("maximally_mixed", &maximally_mixed, py::arg("n"));
  m.def(
      "random_density",
      [](Index n, Index rank, std::uint64_t seed, std::uint64_t stream) {
        return random_density(n, rank, StateSeed{seed, stream});
      },
      py::arg("n"), py::arg("rank"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "random_unitary",
      [](Index n, std::uint64_t seed, std::uint64_t stream) { return random_unitary(n, StateSeed{seed, stream}); },
      py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
  m.def("conjugate", &conjugate, py::arg("u"), py::arg("rho"));
  m.def("tensor", &tensor, py::arg("rho1"), py::arg("rho2"));

  py::class_<FidelityResult>(m, "FidelityResult")
      .def_readonly("value", &FidelityResult::value)
      .def_readonly("raw_value", &FidelityResult::raw_value)
      .def_property_readonly("method", [](const FidelityResult& r) { return std::string(method_name(r.method)); })
      .def_readonly("max_imag_residual", &FidelityResult::max_imag_residual)
      .def_readonly("clamped_mass", &FidelityResult::clamped_mass)
      .def_readonly("elapsed_seconds", &FidelityResult::elapsed_seconds)
      .def("__float__", [](const FidelityResult& r) { return r.value; })
      .def("__repr__", [](const FidelityResult& r) {
        return "<FidelityResult " + std::string(method_name(r.method)) + " " + format_double(r.value) + ">";
      });

  m.attr("METHODS") = py::make_tuple("trace-norm", "classic", "product-sqrt", "product-eig", "auto");
  m.def(
      "fidelity",
      [](const DensityMatrix& rho, const DensityMatrix& sigma, const std::string& method) {
        return fidelity(rho, sigma, to_method(method));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("method") = "auto");

  m.def(
      "sandwich_spectrum",
      [](const DensityMatrix& rho, const DensityMatrix& sigma, double x) {
        const SpectrumReport s = sandwich_spectrum(rho, sigma, x);
        return py::make_tuple(s.eigenvalues, s.max_imag, s.negativity);
      },
      py::arg("rho"), py::arg("sigma"), py::arg("x"),
      "Returns (eigenvalues, max_imag, negativity) of rho^x sigma rho^(1-x).");
  m.def(
      "miszczak_decomposition",
      [](const DensityMatrix& rho, const DensityMatrix& sigma) {
        const MiszczakTerms t = miszczak_decomposition(rho, sigma);
        return py::make_tuple(t.overlap, t.correction);
      },
      py::arg("rho"), py::arg("sigma"), "Returns (overlap, correction).");
  m.def(
      "check_block_structure",
      [](const DensityMatrix& rho, const DensityMatrix& sigma) {
        const BlockStructureReport r = check_block_structure(rho, sigma);
        py::dict d;
        d["p"] = r.p;
        d["q"] = r.q;
        d["max_lower_left"] = r.max_lower_left;
        d["m_offdiag"] = r.m_offdiag;
        d["spec_distance"] = r.spec_distance;
        return d;
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "commuting_oracle",
      [](const std::vector<double>& p, const std::vector<double>& q) { return commuting_oracle(p, q); },
      py::arg("p"), py::arg("q"));

  m.def(
      "run_property_suite",
      [](std::uint64_t trials, const std::vector<Index>& dims, std::uint64_t seed, const std::string& profile) {
        TolProfile p;
        if (profile == "default") {
          p = TolProfile::Default;
        } else if (profile == "strict") {
          p = TolProfile::Strict;
        } else {
          throw py::value_error("unknown tolerance profile '" + profile + "'");
        }
        SuiteReport r;
        {
          py::gil_scoped_release release;
          r = run_property_suite(trials, dims, seed, p);
        }
        return json_to_py(suite_json(r));
      },
      py::arg("trials"), py::arg("dims"), py::arg("seed"), py::arg("profile") = "default",
      "Runs the property suite and returns the report as a dict.");
  m.def(
      "bench",
      [](const std::vector<Index>& dims, int reps, int warmup, std::uint64_t seed,
         const std::vector<std::string>& methods, int threads) {
        BenchConfig c;
        c.dims = dims;
        c.reps = reps;
        c.warmup_reps = warmup;
        c.master_seed = seed;
        c.threads = threads;
        c.methods.clear();
        for (const auto& name : methods) c.methods.push_back(to_method(name));
        BenchReport r;
        {
          py::gil_scoped_release release;
          r = speedup_report(c);
        }
        return py::make_tuple(json_to_py(bench_json(r)), bench_csv(r));
      },
      py::arg("dims"), py::arg("reps") = 10, py::arg("warmup") = 1, py::arg("seed") = 1,
      py::arg("methods") = std::vector<std::string>{"classic", "product-eig"}, py::arg("threads") = 1,
      "Returns (report dict, CSV text).");

  m.def("parse_matrix", [](const std::string& text) { return parse_matrix(text); }, py::arg("text"));
  m.def("serialize_matrix", &serialize_matrix, py::arg("a"));
  m.def("digest", [](const std::string& bytes) { return digest(bytes); }, py::arg("data"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
