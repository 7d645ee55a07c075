#include "pfbhf/coherent.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "pfbhf/energy.hpp"

namespace pfbhf {

namespace {

void require_in_ball(const Vec3& u, const char* who) {
  if (!(u.norm() < 1.0))
    throw std::domain_error(std::string(who) + ": |u| must be < 1");
}

RVec phi_u_impl(const MomentumGrid& grid, const CouplingField& G, const Vec3& u) {
  const RVec denom = grid.disp - grid.k * u;
  return (G.dot(u).array() / denom.array()).matrix();
}

Vec3 psi_impl(const MomentumGrid& grid, const CouplingField& G, const Vec3& p,
              const Vec3& u) {
  const RVec f = phi_u_impl(grid, G, u);
  Vec3 out;
  for (int j = 0; j < 3; ++j)
    out(j) = p(j) - (f.array().square() * grid.k.col(j).array()).sum() -
             2.0 * (f.array() * G.comp[j].array()).sum();
  return out;
}

}  // namespace

Vec phi_u(const MomentumGrid& grid, double g, const Vec3& u) {
  require_in_ball(u, "phi_u");
  const CouplingField G = coupling_field(grid, g);
  return phi_u_impl(grid, G, u).cast<Complex>();
}

Vec3 psi_map(const MomentumGrid& grid, double g, const Vec3& p, const Vec3& u) {
  require_in_ball(u, "psi_map");
  const CouplingField G = coupling_field(grid, g);
  return psi_impl(grid, G, p, u);
}

CoherentReport solve_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                              double tol, int max_iter) {
  if (!(tol > 0.0) || max_iter < 1)
    throw std::invalid_argument("solve_coherent: need tol > 0 and max_iter >= 1");
  const CouplingField G = coupling_field(grid, g);

  CoherentReport rep;
  Vec3 u = p;
  double prev_step = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    if (!(u.norm() < 1.0))
      throw std::runtime_error("solve_coherent: iterates left the unit ball");
    const Vec3 next = psi_impl(grid, G, p, u);
    const double step = (next - u).norm();
    rep.iterations = it;
    rep.residual = step;
    if (prev_step > 0.0) rep.contraction_trace.push_back(step / prev_step);
    prev_step = step;
    u = next;
    if (step <= tol) {
      rep.converged = true;
      break;
    }
  }
  if (!(u.norm() < 1.0))
    throw std::runtime_error("solve_coherent: iterates left the unit ball");

  rep.u = u;
  rep.f = phi_u_impl(grid, G, u).cast<Complex>();
  rep.energy = energy_coherent(grid, g, p, rep.f);
  return rep;
}

CoherentReport solve_coherent_anderson(const MomentumGrid& grid, double g,
                                       const Vec3& p, double tol, int max_iter,
                                       int depth) {
  if (!(tol > 0.0) || max_iter < 1 || depth < 1)
    throw std::invalid_argument(
        "solve_coherent_anderson: need tol > 0, max_iter >= 1, depth >= 1");
  const CouplingField G = coupling_field(grid, g);

  CoherentReport rep;
  std::vector<Vec3> images;     // Psi(u_i)
  std::vector<Vec3> residuals;  // Psi(u_i) - u_i
  Vec3 u = p;
  double prev_step = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    if (!(u.norm() < 1.0))
      throw std::runtime_error("solve_coherent_anderson: iterates left the unit ball");
    const Vec3 image = psi_impl(grid, G, p, u);
    const Vec3 res = image - u;
    const double step = res.norm();
    rep.iterations = it;
    rep.residual = step;
    if (prev_step > 0.0) rep.contraction_trace.push_back(step / prev_step);
    prev_step = step;
    if (step <= tol) {
      u = image;
      rep.converged = true;
      break;
    }

    images.push_back(image);
    residuals.push_back(res);
    const int hist = static_cast<int>(images.size());
    if (hist > depth + 1) {
      images.erase(images.begin());
      residuals.erase(residuals.begin());
    }
    const int m = static_cast<int>(images.size()) - 1;
    if (m == 0) {
      u = image;
      continue;
    }
    // least-squares combination of residual differences
    Eigen::MatrixXd dF(3, m);
    for (int i = 0; i < m; ++i)
      dF.col(i) = residuals.back() - residuals[residuals.size() - 2 - i];
    const Eigen::VectorXd theta =
        dF.colPivHouseholderQr().solve(Eigen::Vector3d(residuals.back()));
    Vec3 accel = images.back();
    for (int i = 0; i < m; ++i)
      accel -= theta(i) * (images.back() - images[images.size() - 2 - i]);
    u = accel.norm() < 1.0 ? accel : image;  // fall back to plain Picard
  }
  if (!(u.norm() < 1.0))
    throw std::runtime_error("solve_coherent_anderson: iterates left the unit ball");

  rep.u = u;
  rep.f = phi_u_impl(grid, G, u).cast<Complex>();
  rep.energy = energy_coherent(grid, g, p, rep.f);
  return rep;
}

Vec rank3_resolvent_apply(const RVec& diag, const CouplingField& G, const Vec& v,
                          double factor) {
  const int n = static_cast<int>(v.size());
  if (diag.size() != n || G.size() != n)
    throw std::invalid_argument("rank3_resolvent_apply: size mismatch");
  if (n > 0 && diag.minCoeff() <= 0.0)
    throw std::invalid_argument("rank3_resolvent_apply: diag must be positive");

  const Vec x0 = v.cwiseQuotient(diag.cast<Complex>());
  if (factor == 0.0) return x0;

  RMat B(n, 3);
  for (int j = 0; j < 3; ++j) B.col(j) = G.comp[j];
  const RMat DiB = diag.cwiseInverse().asDiagonal() * B;

  Eigen::Matrix3d cap = Eigen::Matrix3d::Identity() + factor * (B.transpose() * DiB);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(cap);
  if (!lu.isInvertible())
    throw std::runtime_error("rank3_resolvent_apply: singular capacitance matrix");

  Eigen::Vector3cd y;
  for (int j = 0; j < 3; ++j) y(j) = DiB.col(j).cast<Complex>().dot(v);
  // cap is real: solve the real and imaginary parts separately
  Eigen::Vector3d zr = lu.solve(Eigen::Vector3d(y.real()));
  Eigen::Vector3d zi = lu.solve(Eigen::Vector3d(y.imag()));
  Eigen::Vector3cd z = zr + Complex(0, 1) * zi;

  return x0 - factor * (DiB.cast<Complex>() * z);
}

double coherent_p2_expansion(const MomentumGrid& grid, double g, const Vec3& p) {
  const CouplingField G = coupling_field(grid, g);
  const double e0 = 0.5 * p.squaredNorm() + 0.5 * G.norm2();
  const RVec gp = G.dot(p);
  if (gp.size() == 0) return e0;
  const Vec x = rank3_resolvent_apply(grid.disp, G, gp.cast<Complex>(), 2.0);
  return e0 - (gp.cast<Complex>().dot(x)).real();
}

}  // namespace pfbhf
