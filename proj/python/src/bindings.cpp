#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "multibeam/beams.hpp"
#include "multibeam/detector.hpp"
#include "multibeam/error.hpp"
#include "multibeam/inequalities.hpp"
#include "multibeam/optimizer.hpp"

namespace py = pybind11;
using namespace multibeam;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-beam visibility, predictability and which-way knowledge.";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<BeamState>(m, "BeamState")
      .def(py::init(&BeamState::from_matrix), py::arg("rho"))
      .def_property_readonly("rho", &BeamState::rho)
      .def_property_readonly("beam_count", &BeamState::beam_count)
      .def("purity", &BeamState::purity);

  m.def("lambda_example", &lambda_example, py::arg("lam"));
  m.def("generalized_visibility", py::overload_cast<const BeamState&>(&generalized_visibility));
  m.def("generalized_predictability", py::overload_cast<const BeamState&>(&generalized_predictability));
  m.def("betting_predictability", &betting_predictability);
  m.def("traditional_visibility", [](const BeamState& s) { return traditional_visibility(s).value; });
  m.def("phase_moment", [](const BeamState& s, int order, bool quadrature) {
    return phase_moment(s, order, quadrature ? MomentMethod::quadrature : MomentMethod::analytic);
  }, py::arg("state"), py::arg("order"), py::arg("quadrature") = false);
  m.def("duality_slack", [](const BeamState& s) { return duality_check(s).slack; });

  m.def("analytic_V", &analytic_V, py::arg("theta"));
  m.def("analytic_D", &analytic_D, py::arg("theta"));
  m.def("reduced_visibility", [](double theta) { return generalized_visibility(reduced_beam(symmetric_example(theta))); },
        py::arg("theta"));
  m.def("pvm_distinguishability", [](double theta) {
    return optimal_two_element_pvm(symmetric_example(theta), Measure::knowledge).value;
  }, py::arg("theta"));
  m.def("distinguishability", [](double theta, bool quadrature, int restarts, int max_elements, std::uint64_t seed) {
    SearchOptions opts;
    opts.restarts = restarts;
    opts.max_elements = max_elements;
    Rng rng(seed);
    return distinguishability_numeric(symmetric_example(theta),
                                      quadrature ? Measure::knowledge_quadrature : Measure::knowledge, opts, rng)
        .value;
  }, py::arg("theta"), py::arg("quadrature") = false, py::arg("restarts") = 32, py::arg("max_elements") = 4,
     py::arg("seed") = 1);

  m.def("theta_scan", [](int grid) {
    ScanOptions opts;
    opts.grid = grid;
    opts.optimize = false;
    Rng rng(1);
    py::list rows;
    for (const auto& r : theta_scan(opts, rng)) {
      py::dict d;
      d["theta"] = r.theta;
      d["V"] = r.visibility;
      d["D_analytic"] = r.d_analytic;
      d["duality_sum"] = r.duality_sum;
      rows.append(d);
    }
    return rows;
  }, py::arg("grid") = 200);
}
