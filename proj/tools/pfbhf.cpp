#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pfbhf/report.hpp>

namespace {

using namespace pfbhf;

bool parse_triple(const std::string& text, Vec3& out) {
  std::istringstream is(text);
  char c1 = 0, c2 = 0;
  double x = 0, y = 0, z = 0;
  if (!(is >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',') return false;
  std::string rest;
  if (is >> rest) return false;
  out = Vec3(x, y, z);
  return true;
}

bool parse_list(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) return false;
      out.push_back(v);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

//! Relative output paths land in $PFBHF_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("PFBHF_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string full(dir);
  if (full.back() != '/') full += '/';
  return full + path;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Ground-state energy of a translation-invariant electron coupled to "
      "transverse photons on a momentum shell, minimized over quasifree "
      "states"};
  app.set_config("--config", "", "Config file with the same keys; flags win");

  RunConfig cfg;
  std::string p_text = "0,0,0";
  std::string solver_text = "coherent";
  std::string g_values_text, p_values_text;

  app.add_option("--sigma", cfg.sigma, "Infrared cutoff (>= 0)")
      ->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "Ultraviolet cutoff (> sigma)")
      ->capture_default_str();
  app.add_option("--g", cfg.g, "Coupling constant")->capture_default_str();
  app.add_option("--p", p_text, "Total momentum as 'x,y,z'")
      ->capture_default_str();
  app.add_option("--nr", cfg.n_radial, "Radial quadrature points (>= 2)")
      ->capture_default_str();
  app.add_option("--nang", cfg.n_angular,
                 "Angular rule size (6, 14, 26, 38, 50)")
      ->capture_default_str();
  app.add_option("--solver", solver_text,
                 "coherent | quasifree | lagrange | perturb | oracle | sweep")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol,
                 "Convergence tolerance; 0 = solver default "
                 "(1e-10 coherent, 1e-8 otherwise)")
      ->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "Iteration budget")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled oracle states")
      ->capture_default_str();
  app.add_option("--out", cfg.out_json, "Write the JSON report here");
  app.add_option("--csv", cfg.out_csv, "Write the CSV table here");
  app.add_option("--g-values", g_values_text, "Sweep couplings, comma list");
  app.add_option("--p-values", p_values_text,
                 "Sweep momentum magnitudes (along +z), comma list");
  app.add_option("--jobs", cfg.jobs, "Concurrent sweep points")
      ->capture_default_str();
  app.add_option("--oracle-modes", cfg.oracle_modes, "Fock oracle modes (1..4)")
      ->capture_default_str();
  app.add_option("--oracle-nmax", cfg.oracle_nmax,
                 "Largest photon cutoff in the oracle table (4..10)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::vector<std::string> problems;
  if (!parse_triple(p_text, cfg.p))
    problems.push_back("--p must be three comma-separated numbers, got '" +
                       p_text + "'");
  try {
    cfg.solver = solver_from_string(solver_text);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  if (!g_values_text.empty() && !parse_list(g_values_text, cfg.g_values))
    problems.push_back("--g-values must be a comma list of numbers");
  if (!p_values_text.empty() && !parse_list(p_values_text, cfg.p_values))
    problems.push_back("--p-values must be a comma list of numbers");
  for (const std::string& msg : validate(cfg)) problems.push_back(msg);
  if (!problems.empty()) {
    for (const std::string& msg : problems) std::cerr << "error: " << msg << '\n';
    return 1;
  }

  cfg.out_json = resolve_out(cfg.out_json);
  cfg.out_csv = resolve_out(cfg.out_csv);

  try {
    if (cfg.solver == SolverKind::sweep) {
      const auto [csv, ok] = sweep_csv(cfg);
      if (!cfg.out_csv.empty()) {
        if (!write_file(cfg.out_csv, csv)) {
          std::cerr << "error: cannot write " << cfg.out_csv << '\n';
          return 1;
        }
      } else {
        std::cout << csv;
      }
      return ok ? 0 : 2;
    }

    const RunReport rep = run(cfg);
    const std::string text = report_json(rep);
    if (!cfg.out_json.empty()) {
      if (!write_file(cfg.out_json, text)) {
        std::cerr << "error: cannot write " << cfg.out_json << '\n';
        return 1;
      }
    } else {
      std::cout << text;
    }
    if (!cfg.out_csv.empty()) {
      const std::string csv = csv_header() + "\n" + csv_row(rep) + "\n";
      if (!write_file(cfg.out_csv, csv)) {
        std::cerr << "error: cannot write " << cfg.out_csv << '\n';
        return 1;
      }
    }
    if (!rep.error.empty()) std::cerr << "solver error: " << rep.error << '\n';
    return rep.converged && rep.error.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
