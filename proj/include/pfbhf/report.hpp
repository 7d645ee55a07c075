#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfbhf/types.hpp"

namespace pfbhf {

inline constexpr const char* kVersion = "0.1.0";

enum class SolverKind { coherent, quasifree, lagrange, perturb, oracle, sweep };

std::string to_string(SolverKind kind);
//! Throws std::invalid_argument for unknown names.
SolverKind solver_from_string(const std::string& name);

//! One batch run: grid window, coupling, momentum, solver choice, budgets.
//! tol == 0 picks the per-solver default (1e-10 coherent, 1e-8 otherwise).
struct RunConfig {
  double sigma = 0.5;
  double cutoff = 2.0;
  double g = 0.05;
  Vec3 p = Vec3::Zero();
  int n_radial = 4;
  int n_angular = 14;
  SolverKind solver = SolverKind::coherent;
  double tol = 0.0;
  int max_iter = 500;
  int seed = 0;
  std::string out_json;
  std::string out_csv;
  std::vector<double> g_values;  // sweep lattice: couplings
  std::vector<double> p_values;  // sweep lattice: |p| along z
  int jobs = 1;
  int oracle_modes = 2;
  int oracle_nmax = 8;
};

//! Every constraint violation in cfg, human-readable; empty when valid.
std::vector<std::string> validate(const RunConfig& cfg);

double effective_tol(const RunConfig& cfg);

//! Everything a run reports.  Solver-specific energies are optional and are
//! serialized as JSON null / empty CSV fields when the solver did not run.
struct RunReport {
  RunConfig config;
  std::string version = kVersion;
  double e_vacuum = 0.0;
  std::optional<double> e_coherent;
  std::optional<double> e_quasifree;
  std::optional<double> e_lagrange;
  std::optional<double> e_pert2;
  std::optional<double> e_pert4;
  //! Second-order coefficient three ways (perturb runs only): the grid
  //! quadrature, the reduced radial-log value, and the closed-form candidate,
  //! plus a flag raised when the candidate is off the quadrature by > 1e-3.
  std::optional<double> c22_quad;
  std::optional<double> c22_reduced_value;
  std::optional<double> c22_closed;
  std::optional<bool> c22_flagged;
  Vec3 u = Vec3::Zero();
  double photon_number = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::string error;          // nonempty when a solver failed; never silent
  std::vector<double> trace;  // energy or contraction trace of the solver
  std::vector<int> oracle_nmax;       // oracle runs: photon cutoffs tried
  std::vector<double> oracle_error;   // relative error per cutoff
  double wall_time_ms = 0.0;
};

//! Dispatches cfg.solver (sweep excluded; use sweep_csv).  Throws
//! std::invalid_argument when validate(cfg) is nonempty.
RunReport run(const RunConfig& cfg);

//! Deterministic JSON (sorted keys); wall_time_ms is the only field expected
//! to differ between identical runs.
std::string report_json(const RunReport& rep);
//! Inverse of report_json; the pair round-trips losslessly.
RunReport report_from_json(const std::string& text);

std::string csv_header();
//! One row matching csv_header(); absent energies become empty fields.
std::string csv_row(const RunReport& rep);

//! Full solver battery over g_values x p_values (p along +z), one CSV row
//! per lattice point in declared order, computed with up to cfg.jobs threads.
//! Returns the CSV text and whether every point converged.
std::pair<std::string, bool> sweep_csv(const RunConfig& cfg);

}  // namespace pfbhf
