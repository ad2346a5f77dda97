#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "vring/biot_savart.hpp"
#include "vring/commands.hpp"
#include "vring/config.hpp"
#include "vring/energy.hpp"
#include "vring/kernels.hpp"
#include "vring/profile.hpp"
#include "vring/reynolds.hpp"
#include "vring/ring.hpp"

namespace py = pybind11;
using namespace vring;

namespace {

// JSON crosses the boundary as text; the Python side parses it with the json module.
RunConfig config_from_text(const std::string& text) {
  return text.empty() ? RunConfig{} : config_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_vring, m) {
  m.doc() = "Axisymmetric vortex-ring subsolution core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CompatibilityError>(m, "CompatibilityError", PyExc_RuntimeError);

  py::class_<VorticityProfile>(m, "VorticityProfile")
      .def(py::init([](double strength) { return VorticityProfile::solve(strength); }),
           py::arg("strength"))
      .def(py::init([](double strength, std::function<double(double)> extra) {
             return VorticityProfile::solve(strength, std::move(extra));
           }),
           py::arg("strength"), py::arg("extra"))
      .def("__call__", &VorticityProfile::operator(), py::arg("rho"))
      .def_property_readonly("strength", &VorticityProfile::strength)
      .def_property_readonly("c1", &VorticityProfile::c1)
      .def_property_readonly("c2", &VorticityProfile::c2)
      .def("moment", [](const VorticityProfile& p, int k) { return moment(p, k); })
      .def("gamma_rho", [](const VorticityProfile& p, double rho) { return gamma_rho(p, rho); })
      .def("rotation_energy_integral",
           [](const VorticityProfile& p) { return rotation_energy_integral(p); });

  py::class_<RingParams>(m, "RingParams")
      .def(py::init([](double L, double gamma, double nu_tur) {
             RingParams p{L, gamma, nu_tur};
             p.validate();
             return p;
           }),
           py::arg("L") = 1.0, py::arg("gamma") = 1.0, py::arg("nu_tur") = 1.0)
      .def_readonly("L", &RingParams::L)
      .def_readonly("gamma", &RingParams::gamma)
      .def_readonly("nu_tur", &RingParams::nu_tur);

  m.def("thickness", &thickness, py::arg("params"), py::arg("t"));
  m.def("height", &height, py::arg("params"), py::arg("t"));
  m.def("height_rate", &height_rate, py::arg("params"), py::arg("t"));

  m.def("G", &kernel::G, py::arg("s"));
  m.def("H", &kernel::H, py::arg("s"));
  m.def("aux_exact_1", &kernel::aux_exact_1, py::arg("s"));
  m.def("aux_exact_2", &kernel::aux_exact_2, py::arg("s"));
  m.def("K_2d", &kernel::K_2d, py::arg("zeta"));
  m.def("mean_value_circle", &kernel::mean_value_circle, py::arg("rho"), py::arg("rho_p"));

  m.def(
      "velocity",
      [](const RingParams& p, const VorticityProfile& prof, double t, double r, double z) {
        return velocity(p, prof, t, HalfPlanePoint(r, z)).v;
      },
      py::arg("params"), py::arg("profile"), py::arg("t"), py::arg("r"), py::arg("z"),
      "Meridional velocity v_r + i v_z at (r, z).");
  m.def(
      "residual",
      [](const RingParams& p, const VorticityProfile& prof, double t, double rho, double alpha) {
        return residual(p, prof, t, rho, alpha);
      },
      py::arg("params"), py::arg("profile"), py::arg("t"), py::arg("rho"), py::arg("alpha"));

  m.def(
      "q1_coefficients",
      [](const RingParams& p, const VorticityProfile& prof, double t) {
        const PressureCorrector c = q1_coefficients(p, prof, t);
        return py::dict(py::arg("A1") = c.A1, py::arg("A2") = c.A2, py::arg("c1") = c.c1,
                        py::arg("c2") = c.c2, py::arg("c") = c.c);
      },
      py::arg("params"), py::arg("profile"), py::arg("t"));

  m.def(
      "kinetic_energy",
      [](const RingParams& p, const VorticityProfile& prof, double t, double radius) {
        const KineticEnergy e = kinetic_energy(p, prof, t, radius);
        return py::dict(py::arg("truncated") = e.truncated, py::arg("tail") = e.tail,
                        py::arg("tail_bound") = e.tail_bound, py::arg("total") = e.total());
      },
      py::arg("params"), py::arg("profile"), py::arg("t"), py::arg("truncation_radius"));

  m.def(
      "lambda_max_traceless",
      [](double rr, double rz, double zz) { return lambda_max_traceless({rr, rz, zz}); },
      py::arg("rr"), py::arg("rz"), py::arg("zz"));

  m.def(
      "run_validation_suite",
      [](const std::string& config_json) {
        const RunConfig cfg = config_from_text(config_json);
        py::gil_scoped_release release;
        return to_json_value(run_validation_suite(cfg)).dump();
      },
      py::arg("config_json") = "");
  m.def(
      "config_json",
      [](const std::string& config_json) {
        const RunConfig cfg = config_from_text(config_json);
        cfg.validate();
        return nlohmann::json(cfg).dump();
      },
      py::arg("config_json") = "", "Validated configuration with defaults filled in.");
}
