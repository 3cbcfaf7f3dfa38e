#include "stateconv/cli.hpp"
#include "stateconv/composition.hpp"
#include "stateconv/errors.hpp"
#include "stateconv/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace stateconv;

namespace {

double as_float(const ExtendedReal& v) { return v.infinite ? std::numeric_limits<double>::infinity() : v.value; }

py::dict witness_dict(const AdversaryWitness& w) {
  py::dict d;
  d["omega"] = w.omega;
  d["w"] = w.w;
  d["objective"] = w.objective;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gamma_2 norms, adversary bounds and state-conversion simulation";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CertificateError>(m, "CertificateError", PyExc_RuntimeError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<FunctionSpec>(m, "FunctionSpec")
      .def_readonly("alphabets", &FunctionSpec::alphabets)
      .def_readonly("domain", &FunctionSpec::domain)
      .def_readonly("outputs", &FunctionSpec::outputs)
      .def_readonly("labels", &FunctionSpec::labels)
      .def_property_readonly("arity", &FunctionSpec::arity)
      .def_property_readonly("size", &FunctionSpec::size)
      .def("index_of", &FunctionSpec::index_of)
      .def("__len__", &FunctionSpec::size)
      .def("__repr__", [](const FunctionSpec& f) {
        return "<FunctionSpec arity=" + std::to_string(f.arity()) + " size=" + std::to_string(f.size()) +
               " outputs=" + std::to_string(f.num_outputs()) + ">";
      });

  m.def("make_function", &make_function, py::arg("alphabets"), py::arg("domain"), py::arg("outputs"));
  m.def("identity_bit", &identity_bit);
  m.def("or_fn", &or_fn, py::arg("n"));
  m.def("and_fn", &and_fn, py::arg("n"));
  m.def("parity_fn", &parity_fn, py::arg("n"));
  m.def("majority3", &majority3);
  m.def("constant_fn", &constant_fn, py::arg("n"));
  m.def("boolean2", &boolean2, py::arg("table"));
  m.def("parse_function", &cli::parse_function, py::arg("path"));
  m.def("parse_gram", &cli::parse_gram, py::arg("path"));

  m.def("build_filters", &build_filters, py::arg("spec"));
  m.def("output_gram", &output_gram, py::arg("spec"));

  m.def("gamma2", [](const CMatrix& a) { return as_float(gamma2(a).value); }, py::arg("a"));
  m.def("filtered_gamma2", [](const CMatrix& a, const FilterSet& z) { return as_float(filtered_gamma2(a, z).value); },
        py::arg("a"), py::arg("filters"), "Returns inf when no factorization exists.");
  m.def("gamma2_star", [](const CMatrix& a, const FilterSet& z) { return gamma2_star(a, z).value; }, py::arg("a"),
        py::arg("filters"));

  m.def(
      "adv",
      [](const FunctionSpec& spec) {
        const AdvResult r = adv_pm(spec);
        py::dict d;
        d["value"] = r.value;
        d["filtered_value"] = r.filtered_value;
        d["certified_lower"] = r.gamma_norm;
        d["witness"] = witness_dict(r.witness);
        d["iterations"] = r.info.iterations;
        return d;
      },
      py::arg("spec"));
  m.def(
      "query_distance",
      [](const CMatrix& rho, const CMatrix& sigma, const FunctionSpec& spec) {
        return as_float(query_distance(rho, sigma, build_filters(spec)).value);
      },
      py::arg("rho"), py::arg("sigma"), py::arg("spec"));
  m.def(
      "q_delta",
      [](const CMatrix& rho, const CMatrix& sigma, const FunctionSpec& spec, double delta, bool nc) {
        const FilterSet d = build_filters(spec);
        return (nc ? q_delta_nc(rho, sigma, d, delta) : q_delta(rho, sigma, d, delta)).value;
      },
      py::arg("rho"), py::arg("sigma"), py::arg("spec"), py::arg("delta"), py::arg("nc") = false);
  m.def(
      "sandwich",
      [](const FunctionSpec& spec, double tol) {
        const SandwichReport s = sandwich_check(spec, tol);
        py::dict d;
        d["adv"] = s.adv;
        d["qdist"] = s.qdist;
        d["ratio"] = s.ratio;
        d["bound"] = s.bound;
        d["pass"] = s.pass;
        return d;
      },
      py::arg("spec"), py::arg("tol") = 1e-4);

  m.def(
      "simulate",
      [](const FunctionSpec& spec, double eps) {
        const SimulationReport r = simulate(build_instance(spec, eps));
        py::dict d;
        d["W"] = r.w;
        d["theta"] = r.theta;
        d["dim"] = r.dim;
        d["query_estimate"] = r.query_estimate;
        py::list entries;
        for (const SimulationEntry& e : r.entries) {
          py::dict x;
          x["input"] = e.point;
          x["error"] = e.error;
          x["bound"] = e.error_bound;
          x["tplus"] = e.claims.tplus;
          x["tminus"] = e.claims.tminus;
          x["pass"] = e.pass;
          entries.append(x);
        }
        d["entries"] = entries;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("spec"), py::arg("eps"));

  m.def(
      "property_suite",
      [](int trials, std::uint64_t seed, double tol) {
        py::list out;
        for (const PropertyOutcome& p : property_suite(trials, seed, tol)) {
          py::dict d;
          d["id"] = p.id;
          d["name"] = p.name;
          d["failures"] = p.failures;
          d["worst_margin"] = p.worst_margin;
          d["pass"] = p.passed();
          out.append(d);
        }
        return out;
      },
      py::arg("trials") = 50, py::arg("seed") = 7, py::arg("tol") = 1e-4);
  m.def("spectral_gap_trials", [](int trials, std::uint64_t seed) {
    const GapTrials g = spectral_gap_trials(trials, seed);
    return py::make_tuple(g.failures, g.worst_margin);
  }, py::arg("trials") = 200, py::arg("seed") = 1);

  m.def("compose", [](const FunctionSpec& f, const FunctionSpec& g, int n) { return compose(f, g, n).composed; },
        py::arg("f"), py::arg("g"), py::arg("n"));
  m.def(
      "composition_bounds",
      [](const FunctionSpec& f, const FunctionSpec& g, int n) {
        const UpperReport up = check_upper(f, g, n);
        py::dict d;
        d["adv_composed"] = up.adv_composed;
        d["upper"] = up.bound;
        if (g.num_outputs() == 2) {
          d["lower"] = compose_lower(compose(f, g, n)).value;
        } else {
          d["lower"] = py::none();
        }
        return d;
      },
      py::arg("f"), py::arg("g"), py::arg("n"));
  m.def("direct_sum", [](const FunctionSpec& g, int n) { return direct_sum_check(g, n).adv_sum; }, py::arg("g"),
        py::arg("n"));
}
