#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "svdkit/cantor.hpp"
#include "svdkit/cli.hpp"
#include "svdkit/errors.hpp"
#include "svdkit/scenario.hpp"
#include "svdkit/svd.hpp"

namespace py = pybind11;
using namespace svdkit;

namespace {

SvdGraph scenario_graph(const Scenario& s) {
  return build_graph(build_field(s, s.field), s.resolution, s.connectivity);
}

}  // namespace

PYBIND11_MODULE(_svdkit, m) {
  m.doc() = "Singular vertical distance toolkit";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ScenarioParseError>(m, "ScenarioParseError", PyExc_ValueError);
  py::register_exception<ScenarioSemanticError>(m, "ScenarioSemanticError", PyExc_ValueError);

  m.def("cantor_eval", &cantor_eval, py::arg("x"), py::arg("depth") = kDefaultCantorDepth);
  m.def("cantor_moment", &cantor_moment, py::arg("x"), py::arg("depth") = kDefaultCantorDepth);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("resolution", &Scenario::resolution)
      .def_readonly("connectivity", &Scenario::connectivity)
      .def_property_readonly("wall_count", [](const Scenario& s) { return s.field.walls.size(); })
      .def("serialize", &serialize_scenario)
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"));

  m.def(
      "svd_map",
      [](const Scenario& s, std::pair<double, double> source) {
        const SvdGraph g = scenario_graph(s);
        const SvdMap map = svd_map(g, g.nearest_node({source.first, source.second}));
        py::list nodes;
        for (std::size_t n = 0; n < g.size(); ++n) nodes.append(py::make_tuple(g.nodes[n].x, g.nodes[n].y, map.dist[n]));
        return nodes;
      },
      py::arg("scenario"), py::arg("source"), "List of (x, y, dist) over admissible nodes.");

  m.def(
      "svd",
      [](const Scenario& s, std::pair<double, double> a, std::pair<double, double> b) {
        const SvdGraph g = scenario_graph(s);
        return svd(g, g.nearest_node({a.first, a.second}), g.nearest_node({b.first, b.second})).distance;
      },
      py::arg("scenario"), py::arg("x1"), py::arg("x2"));

  m.def(
      "min_singular",
      [](const Scenario& s) {
        const SvdGraph g = scenario_graph(s);
        const MinSingularVerdict v = is_minimally_singular(g, s.coverage_tol);
        py::dict d;
        d["minimally_singular"] = v.minimally_singular;
        d["class_count"] = v.class_count;
        d["largest_fraction"] = v.largest_fraction;
        return d;
      },
      py::arg("scenario"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, py::bytes(out.str()), err.str());
      },
      py::arg("args"), "Runs one CLI command; returns (exit code, stdout bytes, stderr text).");
}
