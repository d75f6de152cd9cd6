#include "f2bp/body_model.hpp"
#include "f2bp/config.hpp"
#include "f2bp/elements.hpp"
#include "f2bp/mutual_potential.hpp"
#include "f2bp/q_tensors.hpp"
#include "f2bp/rotation.hpp"
#include "f2bp/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

namespace py = pybind11;
using namespace f2bp;

namespace {

PolyhedralBody load_body(const std::filesystem::path& vertices, const std::filesystem::path& faces,
                         double density) {
  return build_body(load_body_model(vertices, faces, density));
}

py::tuple as_tuple(const OrbitalElements& el) { return py::make_tuple(el.a, el.e, el.i, el.node, el.argp, el.nu); }

std::string run_config(const std::filesystem::path& config, std::optional<std::string> integrator,
                       std::optional<double> h, std::optional<double> tol, std::optional<double> tf,
                       std::optional<int> order, std::optional<std::filesystem::path> out_states,
                       std::optional<std::filesystem::path> out_diag) {
  RunConfig c = load_config(config);
  if (integrator) {
    // Switching integrators drops the other one's step parameter.
    c.integrator = parse_integrator(*integrator);
    if (c.integrator == IntegratorKind::Lgvi) c.tol.reset();
    else c.h.reset();
  }
  if (h) c.h = *h;
  if (tol) c.tol = *tol;
  if (tf) c.tf = *tf;
  if (order) c.order = *order;
  c.out_states = out_states.value_or(std::filesystem::path{});
  c.out_diag = out_diag.value_or(std::filesystem::path{});
  c.out_summary.clear();
  py::gil_scoped_release release;
  return Simulation(c).run().to_json();
}

}  // namespace

PYBIND11_MODULE(_f2bp, m) {
  m.doc() = "Full two rigid body gravity and integrators";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<SingularConfigurationError>(m, "SingularConfigurationError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ContactError>(m, "ContactError", base.ptr());
  py::register_exception<StepSizeUnderflowError>(m, "StepSizeUnderflowError", base.ptr());

  py::class_<PolyhedralBody>(m, "Body")
      .def_readonly("mass", &PolyhedralBody::mass)
      .def_readonly("volume", &PolyhedralBody::volume)
      .def_readonly("surface_area", &PolyhedralBody::surface_area)
      .def_readonly("equiv_radius", &PolyhedralBody::equiv_radius)
      .def_readonly("circumscribing_radius", &PolyhedralBody::circumscribing_radius)
      .def_readonly("inertia", &PolyhedralBody::inertia)
      .def_readonly("principal_axes", &PolyhedralBody::principal_axes)
      .def_property_readonly("simplex_count", [](const PolyhedralBody& b) { return b.simplices.size(); });

  m.def("load_body", &load_body, py::arg("vertices"), py::arg("faces"), py::arg("density") = 2500.0,
        "Read vertex and face files and build the body in its principal frame.");
  m.def("octahedron", [](double a, double b, double c, double density) {
    return build_body(make_octahedron(a, b, c, density));
  }, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("density") = 2500.0);

  m.def("q_tensor_entry", [](const std::vector<int>& indices) {
    const QTensorSet q(static_cast<int>(indices.size()));
    const Rational r = q.entry(indices);
    return py::make_tuple(r.numerator(), r.denominator());
  }, py::arg("indices"), "Exact entry as (numerator, denominator).");

  py::class_<GravityGradients>(m, "Gradients")
      .def_readonly("U", &GravityGradients::U)
      .def_readonly("dUdX", &GravityGradients::dUdX)
      .def_readonly("dUdR", &GravityGradients::dUdR)
      .def_readonly("M", &GravityGradients::M)
      .def_readonly("outside_convergence_region", &GravityGradients::outside_convergence_region);

  py::class_<MutualGravity>(m, "MutualGravity")
      .def(py::init([](const PolyhedralBody& b1, const PolyhedralBody& b2, double G, int order) {
             return MutualGravity(b1, b2, G, compute_q_tensors(order), order);
           }),
           py::arg("body1"), py::arg("body2"), py::arg("G") = 6.674e-11, py::arg("order") = 4)
      .def("evaluate", &MutualGravity::evaluate, py::arg("X"), py::arg("R"))
      .def_property_readonly("order", &MutualGravity::order)
      .def_property_readonly("evaluation_count", &MutualGravity::evaluation_count);

  m.def("euler313", &euler313_to_rotation, py::arg("phi1"), py::arg("phi2"), py::arg("phi3"),
        "Rz(phi1) Rx(phi2) Rz(phi3), angles in degrees.");
  m.def("elements_to_state", [](double a, double e, double i, double node, double argp, double nu, double mu) {
    return elements_to_state(OrbitalElements{a, e, i, node, argp, nu}, mu);
  }, py::arg("a"), py::arg("e"), py::arg("i"), py::arg("node"), py::arg("argp"), py::arg("nu"), py::arg("mu"),
        "Angles in radians. Returns (position, velocity).");
  m.def("osculating_elements", [](const Vec3& X, const Vec3& V, double mu) {
    return as_tuple(osculating_elements(X, V, mu));
  }, py::arg("X"), py::arg("V"), py::arg("mu"));

  m.def("_run", &run_config, py::arg("config"), py::arg("integrator") = py::none(), py::arg("h") = py::none(),
        py::arg("tol") = py::none(), py::arg("tf") = py::none(), py::arg("order") = py::none(),
        py::arg("out_states") = py::none(), py::arg("out_diag") = py::none());
}
