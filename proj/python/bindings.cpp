#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfmcl/harness.hpp"

namespace py = pybind11;
using namespace pfmcl;

namespace {

// Config from a dict of str -> str/int/float/bool, on top of a preset.
RunConfig config_from(const py::dict& d) {
  KeyValues kv;
  for (auto [k, v] : d) {
    std::string key = py::str(k);
    if (py::isinstance<py::bool_>(v)) kv[key] = v.cast<bool>() ? "true" : "false";
    else if (py::isinstance<py::float_>(v)) kv[key] = py::str(py::repr(v));
    else kv[key] = py::str(v);
  }
  return resolve_config(kv);
}

py::dict record_dict(const DiagnosticsRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["t"] = r.t;
  d["E_original"] = r.E_original;
  d["E_ieq"] = r.E_ieq;
  d["volume"] = r.volume;
  d["iterations"] = r.iterations;
  d["solver_residual"] = r.solver_residual;
  d["energy_residual"] = r.energy_residual;
  d["D_mu"] = r.dissipation.mu;
  d["D_viscous"] = r.dissipation.viscous;
  d["D_phidot"] = r.dissipation.phidot;
  d["D_slip"] = r.dissipation.slip;
  d["D_wall_work"] = r.dissipation.wall_work;
  d["u_gap"] = r.u_gap;
  d["mu_mean"] = r.mu_mean;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pfmcl, m) {
  m.doc() = "Phase-field moving contact line solver (Fourier x Legendre, IEQ schemes).";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<RunError>(m, "RunError", PyExc_RuntimeError);

  m.def("preset_names", &preset_names);
  m.def("preset_values", &preset_values, py::arg("name"));
  m.def("config_keys", [] {
    std::vector<std::string> k;
    for (const auto& c : config_keys()) k.push_back(c.name);
    return k;
  });
  m.def(
      "resolve_config", [](const py::dict& d) { return to_key_values(config_from(d)); },
      py::arg("config") = py::dict(), "Fully resolved configuration as a dict of strings.");
  m.def("csv_header", &csv_header);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init([](const py::dict& d) { return Simulation(config_from(d)); }),
           py::arg("config") = py::dict())
      .def("step", [](Simulation& s, long n) {
            py::gil_scoped_release nogil;
            for (long k = 0; k < n; ++k) s.step();
          }, py::arg("n") = 1)
      .def("remaining_steps", &Simulation::remaining_steps)
      .def_property_readonly("t", [](const Simulation& s) { return s.state().t; })
      .def_property_readonly("step_count", [](const Simulation& s) { return s.state().step; })
      .def_property_readonly("x", [](const Simulation& s) { return s.grid()->x(); })
      .def_property_readonly("y", [](const Simulation& s) { return s.grid()->y(); })
      .def_property_readonly("phi", [](const Simulation& s) { return Nodal(s.state().cur.phi.nodal()); })
      .def_property_readonly("ux", [](const Simulation& s) { return Nodal(s.state().cur.u.x.nodal()); })
      .def_property_readonly("uy", [](const Simulation& s) { return Nodal(s.state().cur.u.y.nodal()); })
      .def_property_readonly("p", [](const Simulation& s) { return Nodal(s.state().cur.p.nodal()); })
      .def_property_readonly("mu", [](const Simulation& s) { return Nodal(s.state().cur.mu.nodal()); })
      .def_property_readonly("records", [](const Simulation& s) {
        py::list l;
        for (const auto& r : s.records()) l.append(record_dict(r));
        return l;
      })
      .def("config", [](const Simulation& s) { return to_key_values(s.config()); })
      .def("save_checkpoint", [](const Simulation& s, const std::string& path) {
        write_checkpoint(path, s.state());
      }, py::arg("path"))
      .def("detached", [](const Simulation& s) { return detached(s.state(), s.config().drop_phase); });

  m.def(
      "run",
      [](const py::dict& d) {
        RunConfig c = config_from(d);
        RunSummary r;
        {
          py::gil_scoped_release nogil;
          r = run(c);
        }
        py::dict out;
        py::list recs;
        for (const auto& rec : r.records) recs.append(record_dict(rec));
        out["records"] = recs;
        out["mean_iterations"] = r.mean_iterations;
        out["t"] = r.final_state.t;
        out["steps"] = r.final_state.step;
        return out;
      },
      py::arg("config") = py::dict(), "March a configuration to t_max, writing artifacts if 'out' is set.");
}
