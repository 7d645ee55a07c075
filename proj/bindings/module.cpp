// Python bindings for the core library.  Thin and declarative: every class
// mirrors the C++ struct field-for-field, vectors and matrices cross the
// boundary as numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <pfbhf/coherent.hpp>
#include <pfbhf/energy.hpp>
#include <pfbhf/fock.hpp>
#include <pfbhf/grid.hpp>
#include <pfbhf/lagrange.hpp>
#include <pfbhf/perturbation.hpp>
#include <pfbhf/quasifree.hpp>
#include <pfbhf/report.hpp>
#include <pfbhf/variational.hpp>

namespace py = pybind11;
using namespace pfbhf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quasifree ground-state energy of the translation-invariant "
            "Pauli-Fierz Hamiltonian on discretized momentum shells";

  // ---- grid ----
  py::class_<MomentumGrid>(m, "MomentumGrid")
      .def_readonly("sigma", &MomentumGrid::sigma)
      .def_readonly("cutoff", &MomentumGrid::cutoff)
      .def_readonly("n_radial", &MomentumGrid::n_radial)
      .def_readonly("n_angular", &MomentumGrid::n_angular)
      .def_readonly("k", &MomentumGrid::k)
      .def_readonly("kmag", &MomentumGrid::kmag)
      .def_readonly("weight", &MomentumGrid::weight)
      .def_readonly("disp", &MomentumGrid::disp)
      .def("size", &MomentumGrid::size)
      .def("__repr__", [](const MomentumGrid& g) {
        return "MomentumGrid(sigma=" + std::to_string(g.sigma) +
               ", cutoff=" + std::to_string(g.cutoff) +
               ", nodes=" + std::to_string(g.size()) + ")";
      });
  m.def("build_grid", &build_grid, py::arg("sigma"), py::arg("cutoff"),
        py::arg("n_radial"), py::arg("n_angular"));
  m.def("select_nodes", &select_nodes, py::arg("grid"), py::arg("d"));
  m.def("randomize_frames", &randomize_frames, py::arg("grid"), py::arg("seed"));
  m.def("analytic_g_norm2", &analytic_g_norm2, py::arg("g"), py::arg("sigma"),
        py::arg("cutoff"));

  py::class_<CouplingField>(m, "CouplingField")
      .def_readonly("g", &CouplingField::g)
      .def("norm2", &CouplingField::norm2)
      .def("dot", &CouplingField::dot, py::arg("u"));
  m.def("coupling_field", &coupling_field, py::arg("grid"), py::arg("g"));

  // ---- quasifree states ----
  py::class_<QuasifreeState>(m, "QuasifreeState")
      .def_readonly("f", &QuasifreeState::f)
      .def_readonly("gamma", &QuasifreeState::gamma)
      .def_readonly("t", &QuasifreeState::t)
      .def_readonly("pure", &QuasifreeState::pure);
  m.def("state_from_squeeze", &state_from_squeeze, py::arg("f"), py::arg("r"));
  m.def("pureness_residual", &pureness_residual, py::arg("gamma"), py::arg("t"));
  m.def("gamma_from_pair", &gamma_from_pair, py::arg("t"));
  m.def("sample_pure", &sample_pure, py::arg("seed"), py::arg("scale"),
        py::arg("grid"));
  m.def("sample_mixed", &sample_mixed, py::arg("seed"), py::arg("scale"),
        py::arg("grid"), py::arg("mix_scale"));

  // ---- energy ----
  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("total", &EnergyBreakdown::total)
      .def_readonly("kinetic_square", &EnergyBreakdown::kinetic_square)
      .def_readonly("field_quadratic", &EnergyBreakdown::field_quadratic)
      .def_readonly("pairing_group", &EnergyBreakdown::pairing_group)
      .def_readonly("photon_energy", &EnergyBreakdown::photon_energy);
  m.def("energy", &energy, py::arg("grid"), py::arg("g"), py::arg("p"),
        py::arg("state"));
  m.def("energy_coherent", &energy_coherent, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("f"));
  m.def("energy_squeeze", &energy_squeeze, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("f"), py::arg("r"));
  m.def("dressed_momentum", &dressed_momentum, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("f"), py::arg("gamma"));

  // ---- coherent solver ----
  py::class_<CoherentReport>(m, "CoherentReport")
      .def_readonly("f", &CoherentReport::f)
      .def_readonly("u", &CoherentReport::u)
      .def_readonly("energy", &CoherentReport::energy)
      .def_readonly("iterations", &CoherentReport::iterations)
      .def_readonly("residual", &CoherentReport::residual)
      .def_readonly("contraction_trace", &CoherentReport::contraction_trace)
      .def_readonly("converged", &CoherentReport::converged);
  m.def("solve_coherent", &solve_coherent, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("tol") = 1e-10, py::arg("max_iter") = 500);
  m.def("coherent_p2_expansion", &coherent_p2_expansion, py::arg("grid"),
        py::arg("g"), py::arg("p"));

  // ---- variational solver ----
  py::enum_<DescentStrategy>(m, "DescentStrategy")
      .value("gradient", DescentStrategy::gradient)
      .value("newton_preconditioned", DescentStrategy::newton_preconditioned);
  py::class_<VariationalReport>(m, "VariationalReport")
      .def_readonly("f", &VariationalReport::f)
      .def_readonly("r", &VariationalReport::r)
      .def_readonly("state", &VariationalReport::state)
      .def_readonly("energy", &VariationalReport::energy)
      .def_readonly("grad_norm", &VariationalReport::grad_norm)
      .def_readonly("iterations", &VariationalReport::iterations)
      .def_readonly("inside_ball", &VariationalReport::inside_ball)
      .def_readonly("r_estimate", &VariationalReport::r_estimate)
      .def_readonly("certified", &VariationalReport::certified)
      .def_readonly("coercive_hypothesis", &VariationalReport::coercive_hypothesis)
      .def_readonly("energy_trace", &VariationalReport::energy_trace);
  m.def("minimize_quasifree", &minimize_quasifree, py::arg("grid"),
        py::arg("g"), py::arg("p"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 500,
        py::arg("strategy") = DescentStrategy::newton_preconditioned);
  m.def("coercivity_check", &coercivity_check, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("samples"), py::arg("seed"));
  m.def("convexity_check", &convexity_check, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("samples"), py::arg("seed"));
  m.def("estimate_convexity_radius", &estimate_convexity_radius,
        py::arg("grid"), py::arg("g"), py::arg("p"), py::arg("directions"),
        py::arg("seed"));

  // ---- multiplier solver ----
  py::class_<LagrangeState>(m, "LagrangeState")
      .def_readonly("f", &LagrangeState::f)
      .def_readonly("t", &LagrangeState::t)
      .def_readonly("gamma", &LagrangeState::gamma)
      .def_readonly("lambda_", &LagrangeState::lambda)
      .def_readonly("u", &LagrangeState::u);
  py::class_<ResidualSet>(m, "ResidualSet")
      .def_readonly("res_f", &ResidualSet::res_f)
      .def_readonly("res_alpha", &ResidualSet::res_alpha)
      .def_readonly("res_gamma", &ResidualSet::res_gamma)
      .def_readonly("res_lambda", &ResidualSet::res_lambda)
      .def_readonly("res_u", &ResidualSet::res_u)
      .def("max", &ResidualSet::max);
  py::class_<LagrangeReport>(m, "LagrangeReport")
      .def_readonly("state", &LagrangeReport::state)
      .def_readonly("residuals", &LagrangeReport::residuals)
      .def_readonly("energy", &LagrangeReport::energy)
      .def_readonly("iterations", &LagrangeReport::iterations)
      .def_readonly("converged", &LagrangeReport::converged)
      .def_readonly("contraction_trace", &LagrangeReport::contraction_trace);
  m.def("lagrange_iterate", &lagrange_iterate, py::arg("grid"), py::arg("g"),
        py::arg("p"), py::arg("tol") = 1e-8, py::arg("max_iter") = 200);
  m.def("sylvester_solve", &sylvester_solve, py::arg("A"), py::arg("B"));
  m.def(
      "pair_solve",
      [](const MomentumGrid& grid, const Mat& lambda, const Mat& rhs,
         double tol) { return pair_solve(grid, lambda, rhs, tol); },
      py::arg("grid"), py::arg("lambda_"), py::arg("rhs"),
      py::arg("tol") = 1e-10);

  // ---- perturbative expansion ----
  py::class_<PerturbativeSummary>(m, "PerturbativeSummary")
      .def_readonly("e_vacuum", &PerturbativeSummary::e_vacuum)
      .def_readonly("quad_p", &PerturbativeSummary::quad_p)
      .def_readonly("quart_g", &PerturbativeSummary::quart_g)
      .def_readonly("e_pred", &PerturbativeSummary::e_pred);
  m.def("energy_fourth_order", &energy_fourth_order, py::arg("grid"),
        py::arg("g"), py::arg("p"));
  m.def("pert_f", &pert_f, py::arg("grid"), py::arg("g"), py::arg("p"));
  m.def("pert_r", &pert_r, py::arg("grid"), py::arg("g"));
  m.def("c22_quadrature", &c22_quadrature, py::arg("grid"));
  m.def("c22_reduced", &c22_reduced, py::arg("sigma"), py::arg("cutoff"));
  m.def("c22_closed_form", &c22_closed_form, py::arg("sigma"), py::arg("cutoff"));
  m.def("c40_quadrature", &c40_quadrature, py::arg("sigma"), py::arg("cutoff"),
        py::arg("n_quad") = 48);
  m.def("c40_grid_form", &c40_grid_form, py::arg("grid"));

  // ---- brute-force oracle ----
  py::class_<FockContext>(m, "FockContext")
      .def_readonly("modes", &FockContext::modes)
      .def_readonly("nmax", &FockContext::nmax)
      .def_readonly("dim", &FockContext::dim);
  m.def("build_fock", &build_fock, py::arg("modes"), py::arg("nmax"));
  m.def("fock_oracle_energy", &fock_oracle_energy, py::arg("ctx"),
        py::arg("grid"), py::arg("g"), py::arg("p"), py::arg("f"),
        py::arg("r"));

  // ---- batch runs and reports ----
  py::enum_<SolverKind>(m, "SolverKind")
      .value("coherent", SolverKind::coherent)
      .value("quasifree", SolverKind::quasifree)
      .value("lagrange", SolverKind::lagrange)
      .value("perturb", SolverKind::perturb)
      .value("oracle", SolverKind::oracle)
      .value("sweep", SolverKind::sweep);
  m.def("solver_name", [](SolverKind k) { return to_string(k); },
        py::arg("kind"));
  m.def("solver_from_name", &solver_from_string, py::arg("name"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("sigma", &RunConfig::sigma)
      .def_readwrite("cutoff", &RunConfig::cutoff)
      .def_readwrite("g", &RunConfig::g)
      .def_readwrite("p", &RunConfig::p)
      .def_readwrite("n_radial", &RunConfig::n_radial)
      .def_readwrite("n_angular", &RunConfig::n_angular)
      .def_readwrite("solver", &RunConfig::solver)
      .def_readwrite("tol", &RunConfig::tol)
      .def_readwrite("max_iter", &RunConfig::max_iter)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("out_json", &RunConfig::out_json)
      .def_readwrite("out_csv", &RunConfig::out_csv)
      .def_readwrite("g_values", &RunConfig::g_values)
      .def_readwrite("p_values", &RunConfig::p_values)
      .def_readwrite("jobs", &RunConfig::jobs)
      .def_readwrite("oracle_modes", &RunConfig::oracle_modes)
      .def_readwrite("oracle_nmax", &RunConfig::oracle_nmax);
  m.def("validate", &validate, py::arg("config"));
  m.def("effective_tol", &effective_tol, py::arg("config"));

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("config", &RunReport::config)
      .def_readonly("version", &RunReport::version)
      .def_readonly("e_vacuum", &RunReport::e_vacuum)
      .def_readonly("e_coherent", &RunReport::e_coherent)
      .def_readonly("e_quasifree", &RunReport::e_quasifree)
      .def_readonly("e_lagrange", &RunReport::e_lagrange)
      .def_readonly("e_pert2", &RunReport::e_pert2)
      .def_readonly("e_pert4", &RunReport::e_pert4)
      .def_readonly("c22_quad", &RunReport::c22_quad)
      .def_readonly("c22_reduced_value", &RunReport::c22_reduced_value)
      .def_readonly("c22_closed", &RunReport::c22_closed)
      .def_readonly("c22_flagged", &RunReport::c22_flagged)
      .def_readonly("u", &RunReport::u)
      .def_readonly("photon_number", &RunReport::photon_number)
      .def_readonly("iterations", &RunReport::iterations)
      .def_readonly("residual", &RunReport::residual)
      .def_readonly("converged", &RunReport::converged)
      .def_readonly("error", &RunReport::error)
      .def_readonly("trace", &RunReport::trace)
      .def_readonly("oracle_nmax", &RunReport::oracle_nmax)
      .def_readonly("oracle_error", &RunReport::oracle_error)
      .def_readonly("wall_time_ms", &RunReport::wall_time_ms);
  m.def("run", &run, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("report_json", &report_json, py::arg("report"));
  m.def("csv_header", &csv_header);
  m.def("csv_row", &csv_row, py::arg("report"));
  m.def("sweep_csv", &sweep_csv, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
}
