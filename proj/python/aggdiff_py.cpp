#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "aggdiff/analysis.hpp"
#include "aggdiff/dynamics.hpp"
#include "aggdiff/energy.hpp"
#include "aggdiff/initdata.hpp"
#include "aggdiff/model.hpp"
#include "aggdiff/state.hpp"

namespace py = pybind11;
using namespace aggdiff;

namespace {

PhysParams make_params(double m, double k, double chi, bool rescaled) {
  PhysParams p{m, k, chi, rescaled ? Frame::Rescaled : Frame::Original};
  p.validate();
  return p;
}

py::dict energy_dict(const EnergyBreakdown& e) {
  py::dict d;
  d["entropy"] = e.entropy;
  d["interaction"] = e.interaction;
  d["confinement"] = e.confinement;
  d["total"] = e.total;
  return d;
}

// Column-oriented view of a trajectory, one list per diagnostic.
py::dict trajectory_dict(const RunOutcome& run) {
  std::vector<double> t, energy, v, com, gap, rho, dist;
  for (const auto& r : run.trajectory) {
    t.push_back(r.t);
    energy.push_back(r.energy.total);
    v.push_back(r.second_moment);
    com.push_back(r.center_of_mass);
    gap.push_back(r.min_gap);
    rho.push_back(r.max_density);
    dist.push_back(r.step_dist);
  }
  py::dict d;
  d["t"] = t;
  d["energy"] = energy;
  d["second_moment"] = v;
  d["com"] = com;
  d["min_gap"] = gap;
  d["max_density"] = rho;
  d["step_dist"] = dist;
  d["wasserstein_to_final"] = wasserstein_to_final(run);
  d["relative_energy"] = relative_energy(run);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Particle scheme for aggregation-diffusion gradient flows";

  py::register_exception<InvalidInput>(mod, "InvalidInput", PyExc_ValueError);
  py::register_exception<SingularConfiguration>(mod, "SingularConfiguration", PyExc_ArithmeticError);

  py::class_<PhysParams>(mod, "PhysParams")
      .def(py::init(&make_params), py::arg("m"), py::arg("k"), py::arg("chi"),
           py::arg("rescaled") = false)
      .def_readonly("m", &PhysParams::m)
      .def_readonly("k", &PhysParams::k)
      .def_readonly("chi", &PhysParams::chi)
      .def_property_readonly("rescaled",
                             [](const PhysParams& p) { return p.frame == Frame::Rescaled; })
      .def("__repr__", [](const PhysParams& p) {
        return "PhysParams(m=" + std::to_string(p.m) + ", k=" + std::to_string(p.k) +
               ", chi=" + std::to_string(p.chi) + ", frame=" + to_string(p.frame) + ")";
      });

  mod.def("classify_regime", [](const PhysParams& p) {
    const Regime r = classify_regime(p);
    return py::make_tuple(to_string(r.regime), to_string(r.case_tag));
  });

  py::class_<NumParams>(mod, "NumParams")
      .def(py::init<>())
      .def_readwrite("dt", &NumParams::dt)
      .def_readwrite("newton_tol", &NumParams::newton_tol)
      .def_readwrite("newton_max_iter", &NumParams::newton_max_iter)
      .def_readwrite("steady_tol", &NumParams::steady_tol)
      .def_readwrite("t_max", &NumParams::t_max)
      .def_readwrite("max_halvings", &NumParams::max_halvings)
      .def_readwrite("gap_floor", &NumParams::gap_floor)
      .def_readwrite("snapshot_stride", &NumParams::snapshot_stride);

  py::class_<ParticleState>(mod, "ParticleState")
      .def(py::init<std::vector<double>, double>(), py::arg("positions"), py::arg("time") = 0.0)
      .def_property_readonly("positions", &ParticleState::position_vector)
      .def_property_readonly("time", &ParticleState::time)
      .def_property_readonly("min_gap", &ParticleState::min_gap)
      .def("__len__", &ParticleState::size);

  mod.def("wasserstein", &wasserstein);
  mod.def("second_moment", &second_moment);
  mod.def("center_of_mass", &center_of_mass);
  mod.def("dilate", &dilate);
  mod.def("to_density", [](const ParticleState& s) {
    std::vector<double> x, rho;
    for (const auto& node : to_density(s)) {
      x.push_back(node.x);
      rho.push_back(node.rho);
    }
    return py::make_tuple(x, rho);
  });

  mod.def("discrete_energy", [](const ParticleState& s, const PhysParams& p) {
    return energy_dict(discrete_energy(s, p));
  });
  mod.def("discrete_gradient",
          py::overload_cast<const ParticleState&, const PhysParams&>(&discrete_gradient));
  mod.def("discrete_hessian",
          py::overload_cast<const ParticleState&, const PhysParams&>(&discrete_hessian));
  mod.def("virial_residual", &virial_residual);

  mod.def("gaussian_init", &gaussian_init, py::arg("variance"), py::arg("n"));
  mod.def("indicator_init", &indicator_init, py::arg("radius"), py::arg("n"));
  mod.def("cauchy_init", &cauchy_init, py::arg("lam"), py::arg("n"));
  mod.def("hls_init", [](const PhysParams& p, double c_scale, std::size_t n) {
    return hls_init(p, c_scale, n).state;
  });
  mod.def("make_initial_state", &make_initial_state, py::arg("spec"), py::arg("params"),
          py::arg("n"));

  mod.def(
      "evolve",
      [](const ParticleState& s, const PhysParams& p, const NumParams& np) {
        std::optional<RunOutcome> out;
        {
          py::gil_scoped_release release;
          out.emplace(evolve(s, p, np));
        }
        const RunOutcome& run = *out;
        py::dict d;
        d["status"] = to_string(run.status);
        d["final_state"] = run.final_state;
        d["accepted_steps"] = run.accepted_steps;
        d["halvings"] = run.halvings;
        d["note"] = run.note;
        d["trajectory"] = trajectory_dict(run);
        return d;
      },
      py::arg("state"), py::arg("params"), py::arg("num") = NumParams{});

  mod.def(
      "fit_exponential_rate",
      [](const std::vector<double>& t, const std::vector<double>& y, double t0, double t1) {
        const RateFit f = fit_exponential_rate(t, y, t0, t1);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residual"] = f.residual;
        d["samples"] = f.samples;
        return d;
      },
      py::arg("t"), py::arg("y"), py::arg("t0"), py::arg("t1"));

  mod.def(
      "critical_chi_sweep",
      [](const std::vector<double>& k_grid, const std::vector<double>& chi_grid,
         const NumParams& np, const std::string& init, std::size_t n, int jobs) {
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = critical_chi_sweep(k_grid, chi_grid, np, init, n, {jobs, false});
        }
        py::dict chi_c;
        for (const auto& c : res.chi_c) chi_c[py::float_(c.k)] = c.chi_c;
        return chi_c;
      },
      py::arg("k_grid"), py::arg("chi_grid"), py::arg("num"), py::arg("init") = "gaussian:0.32",
      py::arg("n") = 100, py::arg("jobs") = 1);

  mod.def("parse_grid", &parse_grid);
  mod.def("self_similar_reconstruct", &self_similar_reconstruct, py::arg("state"), py::arg("k"),
          py::arg("t"));
}
