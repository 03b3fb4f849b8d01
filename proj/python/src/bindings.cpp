#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "latbose/bogoliubov.hpp"
#include "latbose/ed.hpp"
#include "latbose/lower_bound.hpp"
#include "latbose/parallel.hpp"
#include "latbose/scattering.hpp"
#include "latbose/spectra.hpp"

namespace py = pybind11;
using namespace latbose;

namespace {

py::dict scattering_dict(const ScatteringData& s) {
  py::dict d;
  d["U"] = s.U;
  d["gamma"] = s.gamma;
  d["a"] = s.a;
  d["eight_pi_a"] = s.eight_pi_a();
  d["phi0"] = s.phi0;
  d["w0"] = s.w0;
  d["gamma_rel_error"] = s.rel_error_estimate;
  return d;
}

py::dict thermo_dict(const ThermoResult& t) {
  py::dict d;
  d["rho"] = t.rho;
  d["leading"] = t.leading;
  d["integral"] = t.integral;
  d["e_psi"] = t.e_psi;
  d["ratio"] = t.ratio;
  d["remainder"] = t.remainder;
  d["e_lim"] = t.e_lim;
  d["depletion_density"] = t.diagnostics.depletion_density;
  return d;
}

ScatteringData scattering_for(const LatticeModel& m, py::object U) {
  return U.is_none() ? scattering_data(m) : scattering_data(m, U.cast<double>());
}

}  // namespace

PYBIND11_MODULE(_latbose, m) {
  m.doc() = "Bose-Hubbard lattice gas: scattering data, trial energies, spectra and ED";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<Error>(m, "LatboseError", PyExc_RuntimeError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.get_stored().ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<LatticeModel>(m, "LatticeModel")
      .def_static("from_json", &build_lattice, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_lattice(path); },
                  py::arg("path"))
      .def("to_json", [](const LatticeModel& self) { return to_json(self); })
      .def_property_readonly("U", &LatticeModel::U)
      .def_property_readonly("c_gap", &LatticeModel::c_gap)
      .def_property_readonly("hopping_length", &LatticeModel::hopping_length)
      .def("with_U", &LatticeModel::with_U, py::arg("U"))
      .def("dispersion",
           [](const LatticeModel& self, double px, double py_, double pz) {
             return dispersion(self, Vec3(px, py_, pz));
           },
           py::arg("px"), py::arg("py"), py::arg("pz"));

  m.def("set_threads", &parallel::set_threads, py::arg("threads"),
        "Size of the worker pool used by the library (0 selects the hardware count).");

  m.def("compute_gamma", [](const LatticeModel& model) { return compute_gamma(model); },
        py::arg("model"), "gamma = <1/eps>/2 over the Brillouin zone.");
  m.def("scattering_data",
        [](const LatticeModel& model, py::object U) { return scattering_dict(scattering_for(model, U)); },
        py::arg("model"), py::arg("U") = py::none());

  m.def("trial_energy_thermo",
        [](const LatticeModel& model, double rho, py::object U) {
          return thermo_dict(trial_energy_thermo(model, rho, scattering_for(model, U)));
        },
        py::arg("model"), py::arg("rho"), py::arg("U") = py::none());
  m.def("trial_energy_finite",
        [](const LatticeModel& model, double rho, int L, py::object U) {
          const FiniteTrialResult r = trial_energy_finite(model, {rho, L}, scattering_for(model, U));
          py::dict d;
          d["L"] = r.L;
          d["rho"] = r.rho;
          d["N0"] = r.N0;
          d["depletion"] = r.depletion;
          d["energy_density"] = r.energy_density;
          return d;
        },
        py::arg("model"), py::arg("rho"), py::arg("L"), py::arg("U") = py::none());
  m.def("upper_bound_sweep",
        [](const LatticeModel& model, double rho_min, double rho_max, int points) {
          const UpperBoundSweep s =
              upper_bound_sweep(model, scattering_data(model), rho_min, rho_max, points);
          py::list rows;
          for (const ThermoResult& t : s.points) rows.append(thermo_dict(t));
          py::dict d;
          d["points"] = rows;
          d["fit_exponent"] = s.fit_exponent;
          d["depletion_exponent"] = s.depletion_exponent;
          return d;
        },
        py::arg("model"), py::arg("rho_min"), py::arg("rho_max"), py::arg("points") = 0);

  m.def("spectrum",
        [](const LatticeModel& model, int ell, const std::string& kind) {
          const LaplacianKind k = parse_laplacian_kind(kind);
          switch (k) {
            case LaplacianKind::periodic: return periodic_spectrum(model, ell).eigenvalues;
            case LaplacianKind::neumann: return neumann_spectrum(model, ell).eigenvalues;
            case LaplacianKind::neumann_special: return special_neumann_eigs(model, ell).eigenvalues;
          }
          return std::vector<double>{};
        },
        py::arg("model"), py::arg("ell"), py::arg("kind") = "neumann",
        "Ascending Laplacian eigenvalues on the (ell+1)^3 box.");
  m.def("neumann_gap", &neumann_gap, py::arg("model"), py::arg("ell"));

  m.def("ground_state_energy",
        [](const LatticeModel& model, int ell, int n, py::object U, const std::string& bc,
           std::uint64_t max_dimension) {
          EDConfig config;
          config.max_dimension = max_dimension;
          const double u = U.is_none() ? model.U() : U.cast<double>();
          LanczosParams params;
          params.want_vector = false;
          const EDResult r = ground_state_energy(
              build_hamiltonian(model, ell, n, u, parse_boundary(bc), config), params);
          py::dict d;
          d["e0"] = r.e0;
          d["residual"] = r.residual;
          d["iterations"] = r.iterations;
          d["dim"] = r.basis_dim;
          return d;
        },
        py::arg("model"), py::arg("ell"), py::arg("n"), py::arg("U") = py::none(),
        py::arg("bc") = "neumann", py::arg("max_dimension") = 2'000'000);
  m.def("two_body_extraction",
        [](const LatticeModel& model, double U, const std::vector<int>& L) {
          const TwoBodyExtraction x = two_body_scattering_extraction(model, U, L);
          py::dict d;
          d["L"] = x.L;
          d["scaled_energy"] = x.scaled_energy;
          d["e_inf"] = x.e_inf;
          d["fit_degree"] = x.fit_degree;
          return d;
        },
        py::arg("model"), py::arg("U"), py::arg("L"));

  m.def("certificate",
        [](const LatticeModel& model, int n, int ell, std::optional<double> mu) {
          const CertificateResult r = certificate(model, {n, ell, mu}, neumann_spectrum(model, ell),
                                                  scattering_data(model));
          py::dict d;
          d["lb_energy"] = r.lb_energy;
          d["S"] = r.bogoliubov_sum;
          d["mu"] = r.mu;
          d["mu_min"] = r.window.mu_min;
          d["mu_max"] = r.window.mu_max;
          d["gap"] = r.window.gap;
          d["excited"] = r.excited;
          return d;
        },
        py::arg("model"), py::arg("n"), py::arg("ell"), py::arg("mu") = py::none());
  m.def("gp_length",
        [](double rho, double a, double c_gap) {
          const GPLength g = gp_length(rho, a, c_gap);
          py::dict d;
          d["ell"] = g.ell;
          d["formula"] = g.formula;
          d["adjusted"] = g.adjusted;
          d["p"] = g.p;
          return d;
        },
        py::arg("rho"), py::arg("a"), py::arg("c_gap"));
}
