#include "pfbhf/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pfbhf/coherent.hpp"
#include "pfbhf/energy.hpp"
#include "pfbhf/fock.hpp"
#include "pfbhf/grid.hpp"
#include "pfbhf/lagrange.hpp"
#include "pfbhf/perturbation.hpp"
#include "pfbhf/quasifree.hpp"
#include "pfbhf/variational.hpp"

namespace pfbhf {

namespace {

using nlohmann::json;

const char* kSolverNames[] = {"coherent", "quasifree", "lagrange",
                              "perturb",  "oracle",    "sweep"};

// shortest representation that parses back to the same double
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json vec3_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

Vec3 vec3_from_json(const json& j) {
  return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["sigma"] = cfg.sigma;
  j["cutoff"] = cfg.cutoff;
  j["g"] = cfg.g;
  j["p"] = vec3_to_json(cfg.p);
  j["n_radial"] = cfg.n_radial;
  j["n_angular"] = cfg.n_angular;
  j["solver"] = to_string(cfg.solver);
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["seed"] = cfg.seed;
  j["out_json"] = cfg.out_json;
  j["out_csv"] = cfg.out_csv;
  j["g_values"] = cfg.g_values;
  j["p_values"] = cfg.p_values;
  j["jobs"] = cfg.jobs;
  j["oracle_modes"] = cfg.oracle_modes;
  j["oracle_nmax"] = cfg.oracle_nmax;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  cfg.sigma = j.at("sigma").get<double>();
  cfg.cutoff = j.at("cutoff").get<double>();
  cfg.g = j.at("g").get<double>();
  cfg.p = vec3_from_json(j.at("p"));
  cfg.n_radial = j.at("n_radial").get<int>();
  cfg.n_angular = j.at("n_angular").get<int>();
  cfg.solver = solver_from_string(j.at("solver").get<std::string>());
  cfg.tol = j.at("tol").get<double>();
  cfg.max_iter = j.at("max_iter").get<int>();
  cfg.seed = j.at("seed").get<int>();
  cfg.out_json = j.at("out_json").get<std::string>();
  cfg.out_csv = j.at("out_csv").get<std::string>();
  cfg.g_values = j.at("g_values").get<std::vector<double>>();
  cfg.p_values = j.at("p_values").get<std::vector<double>>();
  cfg.jobs = j.at("jobs").get<int>();
  cfg.oracle_modes = j.at("oracle_modes").get<int>();
  cfg.oracle_nmax = j.at("oracle_nmax").get<int>();
  return cfg;
}

double vacuum_energy(const MomentumGrid& grid, double g, const Vec3& p) {
  return 0.5 * p.squaredNorm() + 0.5 * coupling_field(grid, g).norm2();
}

Vec random_field(int n, double scale, std::mt19937& gen) {
  std::normal_distribution<double> dist(0.0, scale);
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(dist(gen), dist(gen));
  return f;
}

Mat random_symmetric(int n, double scale, std::mt19937& gen) {
  std::normal_distribution<double> dist(0.0, scale);
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = Complex(dist(gen), dist(gen));
  return ((r + r.transpose()) / 2.0).eval();
}

void run_coherent(const MomentumGrid& grid, const RunConfig& cfg, double tol,
                  RunReport& rep) {
  const CoherentReport c = solve_coherent(grid, cfg.g, cfg.p, tol, cfg.max_iter);
  rep.e_coherent = c.energy;
  rep.u = c.u;
  rep.photon_number = c.f.squaredNorm();
  rep.iterations = c.iterations;
  rep.residual = c.residual;
  rep.converged = c.converged;
  rep.trace = c.contraction_trace;
}

void run_quasifree(const MomentumGrid& grid, const RunConfig& cfg, double tol,
                   RunReport& rep) {
  const VariationalReport v = minimize_quasifree(grid, cfg.g, cfg.p, tol, cfg.max_iter);
  rep.e_quasifree = v.energy;
  rep.u = dressed_momentum(grid, cfg.g, cfg.p, v.f, v.state.gamma);
  rep.photon_number = v.state.gamma.trace().real() + v.f.squaredNorm();
  rep.iterations = v.iterations;
  rep.residual = v.grad_norm;
  rep.converged = v.grad_norm <= tol;
  rep.trace = v.energy_trace;
}

void run_lagrange(const MomentumGrid& grid, const RunConfig& cfg, double tol,
                  RunReport& rep) {
  const LagrangeReport l = lagrange_iterate(grid, cfg.g, cfg.p, tol, cfg.max_iter);
  rep.e_lagrange = l.energy;
  rep.u = l.state.u;
  rep.photon_number = l.state.gamma.trace().real() + l.state.f.squaredNorm();
  rep.iterations = l.iterations;
  rep.residual = l.residuals.max();
  rep.converged = l.converged;
  rep.trace = l.contraction_trace;
}

void run_perturb(const MomentumGrid& grid, const RunConfig& cfg, RunReport& rep) {
  const PerturbativeSummary s = energy_fourth_order(grid, cfg.g, cfg.p);
  rep.e_pert2 = s.e_vacuum - s.quad_p;
  rep.e_pert4 = s.e_pred;
  const double quad = c22_quadrature(grid);
  const double reduced = c22_reduced(grid.sigma, grid.cutoff);
  const double closed = c22_closed_form(grid.sigma, grid.cutoff);
  rep.c22_quad = quad;
  rep.c22_reduced_value = reduced;
  rep.c22_closed = closed;
  rep.c22_flagged = std::abs(closed / quad - 1.0) > 1e-3;
  rep.u = cfg.p;
  rep.photon_number = pert_f(grid, cfg.g, cfg.p).squaredNorm();
  rep.iterations = 0;
  rep.residual = std::abs(reduced - quad);
  rep.converged = true;
}

void run_oracle(const MomentumGrid& grid, const RunConfig& cfg, RunReport& rep) {
  const MomentumGrid small = select_nodes(grid, cfg.oracle_modes);
  std::mt19937 gen(static_cast<unsigned>(cfg.seed));
  const Vec f = random_field(cfg.oracle_modes, 0.08, gen);
  const Mat r = random_symmetric(cfg.oracle_modes, 0.05, gen);
  const double closed = energy_squeeze(small, cfg.g, cfg.p, f, r);
  rep.e_quasifree = closed;
  rep.photon_number = state_from_squeeze(f, r).gamma.trace().real() + f.squaredNorm();
  bool decreasing = true;
  double prev = 0.0;
  for (int nmax = 4; nmax <= cfg.oracle_nmax; nmax += 2) {
    const FockContext ctx = build_fock(cfg.oracle_modes, nmax);
    const double brute = fock_oracle_energy(ctx, small, cfg.g, cfg.p, f, r);
    const double rel = std::abs(brute - closed) / std::abs(closed);
    if (!rep.oracle_error.empty() && rel >= prev) decreasing = false;
    rep.oracle_nmax.push_back(nmax);
    rep.oracle_error.push_back(rel);
    prev = rel;
  }
  rep.iterations = static_cast<int>(rep.oracle_nmax.size());
  rep.residual = rep.oracle_error.empty() ? 0.0 : rep.oracle_error.back();
  rep.converged = decreasing;
}

//! Full battery at one lattice point; solver failures land in rep.error.
RunReport sweep_point(const MomentumGrid& grid, const RunConfig& base, double g,
                      double p_norm) {
  RunConfig cfg = base;
  cfg.g = g;
  cfg.p = Vec3(0.0, 0.0, p_norm);
  RunReport rep;
  rep.config = cfg;
  rep.e_vacuum = vacuum_energy(grid, g, cfg.p);
  const double tol_coh = cfg.tol > 0 ? cfg.tol : 1e-10;
  const double tol_other = cfg.tol > 0 ? cfg.tol : 1e-8;

  double residual = 0.0;
  auto note = [&rep](const char* which, const std::exception& e) {
    if (!rep.error.empty()) rep.error += "; ";
    rep.error += std::string(which) + ": " + e.what();
    rep.converged = false;
  };

  try {
    const CoherentReport c = solve_coherent(grid, g, cfg.p, tol_coh, cfg.max_iter);
    rep.e_coherent = c.energy;
    rep.u = c.u;
    rep.iterations = c.iterations;
    residual = std::max(residual, c.residual);
    rep.converged = rep.converged && c.converged;
  } catch (const std::exception& e) {
    note("coherent", e);
  }

  if (grid.sigma > 0.0) {
    try {
      const VariationalReport v =
          minimize_quasifree(grid, g, cfg.p, tol_other, cfg.max_iter);
      rep.e_quasifree = v.energy;
      rep.photon_number = v.state.gamma.trace().real() + v.f.squaredNorm();
      rep.iterations = v.iterations;
      residual = std::max(residual, v.grad_norm);
      rep.converged = rep.converged && v.grad_norm <= tol_other;
    } catch (const std::exception& e) {
      note("quasifree", e);
    }
    try {
      const LagrangeReport l = lagrange_iterate(grid, g, cfg.p, tol_other, cfg.max_iter);
      rep.e_lagrange = l.energy;
      residual = std::max(residual, l.residuals.max());
      rep.converged = rep.converged && l.converged;
    } catch (const std::exception& e) {
      note("lagrange", e);
    }
  }

  const PerturbativeSummary s = energy_fourth_order(grid, g, cfg.p);
  rep.e_pert2 = s.e_vacuum - s.quad_p;
  rep.e_pert4 = s.e_pred;
  rep.residual = residual;
  return rep;
}

}  // namespace

std::string to_string(SolverKind kind) {
  return kSolverNames[static_cast<int>(kind)];
}

SolverKind solver_from_string(const std::string& name) {
  for (int i = 0; i < 6; ++i)
    if (name == kSolverNames[i]) return static_cast<SolverKind>(i);
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> bad;
  if (!(cfg.sigma >= 0.0)) bad.push_back("sigma >= 0 required");
  if (!(cfg.sigma < cfg.cutoff)) bad.push_back("sigma < cutoff required");
  if (!(cfg.tol >= 0.0)) bad.push_back("tol must be >= 0 (0 selects the default)");
  if (cfg.max_iter < 1) bad.push_back("max_iter must be >= 1");
  if (cfg.n_radial < 2) bad.push_back("n_radial must be >= 2");
  if (cfg.n_angular != 6 && cfg.n_angular != 14 && cfg.n_angular != 26 &&
      cfg.n_angular != 38 && cfg.n_angular != 50)
    bad.push_back("n_angular must be one of 6, 14, 26, 38, 50");
  if ((cfg.solver == SolverKind::quasifree || cfg.solver == SolverKind::lagrange) &&
      !(cfg.sigma > 0.0))
    bad.push_back(std::string(to_string(cfg.solver)) +
                  " requires sigma > 0 (massive photons)");
  if (cfg.solver == SolverKind::sweep) {
    if (cfg.g_values.empty()) bad.push_back("sweep needs at least one g value");
    if (cfg.p_values.empty()) bad.push_back("sweep needs at least one p value");
    for (double pv : cfg.p_values)
      if (!(pv >= 0.0)) bad.push_back("sweep p values must be >= 0");
  }
  if (cfg.jobs < 1) bad.push_back("jobs must be >= 1");
  if (cfg.solver == SolverKind::oracle) {
    if (cfg.oracle_modes < 1 || cfg.oracle_modes > 4)
      bad.push_back("oracle modes must be in 1..4");
    if (cfg.oracle_nmax < 4 || cfg.oracle_nmax > 10)
      bad.push_back("oracle nmax must be in 4..10");
  }
  return bad;
}

double effective_tol(const RunConfig& cfg) {
  if (cfg.tol > 0.0) return cfg.tol;
  return cfg.solver == SolverKind::coherent ? 1e-10 : 1e-8;
}

RunReport run(const RunConfig& cfg) {
  const std::vector<std::string> bad = validate(cfg);
  if (!bad.empty()) {
    std::string joined;
    for (const std::string& b : bad) {
      if (!joined.empty()) joined += "; ";
      joined += b;
    }
    throw std::invalid_argument(joined);
  }
  if (cfg.solver == SolverKind::sweep)
    throw std::invalid_argument("sweep runs go through sweep_csv");

  const auto start = std::chrono::steady_clock::now();
  const MomentumGrid grid =
      build_grid(cfg.sigma, cfg.cutoff, cfg.n_radial, cfg.n_angular);

  RunReport rep;
  rep.config = cfg;
  rep.e_vacuum = vacuum_energy(grid, cfg.g, cfg.p);
  const double tol = effective_tol(cfg);

  try {
    switch (cfg.solver) {
      case SolverKind::coherent:
        run_coherent(grid, cfg, tol, rep);
        break;
      case SolverKind::quasifree:
        run_quasifree(grid, cfg, tol, rep);
        break;
      case SolverKind::lagrange:
        run_lagrange(grid, cfg, tol, rep);
        break;
      case SolverKind::perturb:
        run_perturb(grid, cfg, rep);
        break;
      case SolverKind::oracle:
        run_oracle(grid, cfg, rep);
        break;
      case SolverKind::sweep:
        break;
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.converged = false;
  }

  rep.wall_time_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rep;
}

std::string report_json(const RunReport& rep) {
  json j;
  j["config"] = config_to_json(rep.config);
  j["version"] = rep.version;
  j["e_vacuum"] = rep.e_vacuum;
  j["e_coherent"] = optional_to_json(rep.e_coherent);
  j["e_quasifree"] = optional_to_json(rep.e_quasifree);
  j["e_lagrange"] = optional_to_json(rep.e_lagrange);
  j["e_pert2"] = optional_to_json(rep.e_pert2);
  j["e_pert4"] = optional_to_json(rep.e_pert4);
  j["c22_quadrature"] = optional_to_json(rep.c22_quad);
  j["c22_reduced"] = optional_to_json(rep.c22_reduced_value);
  j["c22_closed_form"] = optional_to_json(rep.c22_closed);
  j["c22_flagged"] = rep.c22_flagged ? json(*rep.c22_flagged) : json(nullptr);
  j["u"] = vec3_to_json(rep.u);
  j["photon_number"] = rep.photon_number;
  j["iterations"] = rep.iterations;
  j["residual"] = rep.residual;
  j["converged"] = rep.converged;
  j["error"] = rep.error;
  j["trace"] = rep.trace;
  j["oracle_nmax"] = rep.oracle_nmax;
  j["oracle_relative_error"] = rep.oracle_error;
  j["wall_time_ms"] = rep.wall_time_ms;
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunReport rep;
  rep.config = config_from_json(j.at("config"));
  rep.version = j.at("version").get<std::string>();
  rep.e_vacuum = j.at("e_vacuum").get<double>();
  rep.e_coherent = optional_from_json(j.at("e_coherent"));
  rep.e_quasifree = optional_from_json(j.at("e_quasifree"));
  rep.e_lagrange = optional_from_json(j.at("e_lagrange"));
  rep.e_pert2 = optional_from_json(j.at("e_pert2"));
  rep.e_pert4 = optional_from_json(j.at("e_pert4"));
  rep.c22_quad = optional_from_json(j.at("c22_quadrature"));
  rep.c22_reduced_value = optional_from_json(j.at("c22_reduced"));
  rep.c22_closed = optional_from_json(j.at("c22_closed_form"));
  if (j.at("c22_flagged").is_null())
    rep.c22_flagged = std::nullopt;
  else
    rep.c22_flagged = j.at("c22_flagged").get<bool>();
  rep.u = vec3_from_json(j.at("u"));
  rep.photon_number = j.at("photon_number").get<double>();
  rep.iterations = j.at("iterations").get<int>();
  rep.residual = j.at("residual").get<double>();
  rep.converged = j.at("converged").get<bool>();
  rep.error = j.at("error").get<std::string>();
  rep.trace = j.at("trace").get<std::vector<double>>();
  rep.oracle_nmax = j.at("oracle_nmax").get<std::vector<int>>();
  rep.oracle_error = j.at("oracle_relative_error").get<std::vector<double>>();
  rep.wall_time_ms = j.at("wall_time_ms").get<double>();
  return rep;
}

std::string csv_header() {
  return "g,p_norm,E_vac,E_coh,E_qf,E_lagrange,E_pert2,E_pert4,iters,residual";
}

std::string csv_row(const RunReport& rep) {
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
  };
  std::ostringstream os;
  os << fmt_double(rep.config.g) << ',' << fmt_double(rep.config.p.norm()) << ','
     << fmt_double(rep.e_vacuum) << ',' << opt(rep.e_coherent) << ','
     << opt(rep.e_quasifree) << ',' << opt(rep.e_lagrange) << ','
     << opt(rep.e_pert2) << ',' << opt(rep.e_pert4) << ',' << rep.iterations
     << ',' << fmt_double(rep.residual);
  return os.str();
}

std::pair<std::string, bool> sweep_csv(const RunConfig& cfg) {
  const std::vector<std::string> bad = validate(cfg);
  if (!bad.empty()) throw std::invalid_argument(bad.front());

  const MomentumGrid grid =
      build_grid(cfg.sigma, cfg.cutoff, cfg.n_radial, cfg.n_angular);

  struct Point {
    double g, p;
  };
  std::vector<Point> points;
  for (double gv : cfg.g_values)
    for (double pv : cfg.p_values) points.push_back({gv, pv});

  std::vector<RunReport> reports(points.size());
  std::atomic<size_t> next(0);
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
      reports[i] = sweep_point(grid, cfg, points[i].g, points[i].p);
  };
  const int jobs = std::min<int>(cfg.jobs, static_cast<int>(points.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // deterministic lattice order regardless of scheduling
  std::ostringstream os;
  os << csv_header() << '\n';
  bool all_converged = true;
  for (const RunReport& rep : reports) {
    os << csv_row(rep) << '\n';
    all_converged = all_converged && rep.converged && rep.error.empty();
  }
  return {os.str(), all_converged};
}

}  // namespace pfbhf
