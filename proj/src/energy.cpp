#include "pfbhf/energy.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pfbhf {

namespace {

void check_field(const MomentumGrid& grid, const Vec& f, const char* who) {
  if (f.size() != grid.size())
    throw std::invalid_argument(std::string(who) + ": field size does not match grid");
}

void check_kernel(const MomentumGrid& grid, const Mat& m, const char* who) {
  if (m.rows() != grid.size() || m.cols() != grid.size())
    throw std::invalid_argument(std::string(who) + ": kernel shape does not match grid");
}

// Pieces shared by the energy and its partial derivatives.
struct Assembly {
  CouplingField G;
  std::array<Vec, 3> phi;  // G_j + k_j f
  Vec3 u = Vec3::Zero();   // p - Tr[gamma k] - f* k f - 2 Re(f* G)
  RVec kdotu;              // k_a . u
  RMat KK;                 // k_a . k_b
  EnergyBreakdown bd;
};

Assembly assemble(const MomentumGrid& grid, double g, const Vec3& p,
                  const Vec& f, const Mat& gamma, const Mat& t) {
  Assembly A;
  A.G = coupling_field(grid, g);
  const RVec gdiag = gamma.diagonal().real();

  Vec3 T;
  for (int j = 0; j < 3; ++j) {
    A.phi[j] = A.G.comp[j].cast<Complex>() +
               f.cwiseProduct(grid.k.col(j).cast<Complex>());
    T(j) = gdiag.dot(grid.k.col(j)) +
           (f.array().abs2() * grid.k.col(j).array()).sum() +
           2.0 * (f.real().array() * A.G.comp[j].array()).sum();
  }
  A.u = p - T;
  A.kdotu = grid.k * A.u;
  A.KK.noalias() = grid.k * grid.k.transpose();

  EnergyBreakdown& bd = A.bd;
  bd.kinetic_square = A.u.squaredNorm();
  bd.field_quadratic = gamma.cwiseAbs2().cwiseProduct(A.KK).sum() +
                       t.cwiseAbs2().cwiseProduct(A.KK).sum() +
                       (gdiag.array() * grid.kmag.array().square()).sum();
  Complex pairing(0.0, 0.0);
  for (int j = 0; j < 3; ++j) {
    pairing += 2.0 * A.phi[j].dot(t * A.phi[j].conjugate());
    pairing += 2.0 * A.phi[j].dot(gamma * A.phi[j]);
    pairing += A.phi[j].squaredNorm();
  }
  bd.pairing_group = pairing.real();
  bd.photon_energy = (gdiag.array() * grid.kmag.array()).sum() +
                     (f.array().abs2() * grid.kmag.array()).sum();
  bd.total = 0.5 * (bd.kinetic_square + bd.field_quadratic + bd.pairing_group) +
             bd.photon_energy;
  return A;
}

}  // namespace

Vec3 dressed_momentum(const MomentumGrid& grid, double g, const Vec3& p,
                      const Vec& f, const Mat& gamma) {
  check_field(grid, f, "dressed_momentum");
  check_kernel(grid, gamma, "dressed_momentum");
  const CouplingField G = coupling_field(grid, g);
  const RVec gdiag = gamma.diagonal().real();
  Vec3 u;
  for (int j = 0; j < 3; ++j)
    u(j) = p(j) - gdiag.dot(grid.k.col(j)) -
           (f.array().abs2() * grid.k.col(j).array()).sum() -
           2.0 * (f.real().array() * G.comp[j].array()).sum();
  return u;
}

EnergyBreakdown energy(const MomentumGrid& grid, double g, const Vec3& p,
                       const QuasifreeState& state) {
  check_field(grid, state.f, "energy");
  check_kernel(grid, state.gamma, "energy");
  check_kernel(grid, state.t, "energy");
  return assemble(grid, g, p, state.f, state.gamma, state.t).bd;
}

EnergyBreakdown positivity_terms(const MomentumGrid& grid, double g, const Vec3& p,
                                 const QuasifreeState& state) {
  return energy(grid, g, p, state);
}

double energy_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                       const Vec& f) {
  check_field(grid, f, "energy_coherent");
  const CouplingField G = coupling_field(grid, g);
  Vec3 T;
  for (int j = 0; j < 3; ++j)
    T(j) = (f.array().abs2() * grid.k.col(j).array()).sum() +
           2.0 * (f.real().array() * G.comp[j].array()).sum();
  const Vec3 u = p - T;
  return 0.5 * G.norm2() + 0.5 * u.squaredNorm() +
         (grid.disp.array() * f.array().abs2()).sum();
}

Vec grad_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                  const Vec& f) {
  check_field(grid, f, "grad_coherent");
  const CouplingField G = coupling_field(grid, g);
  Vec3 T;
  for (int j = 0; j < 3; ++j)
    T(j) = (f.array().abs2() * grid.k.col(j).array()).sum() +
           2.0 * (f.real().array() * G.comp[j].array()).sum();
  const Vec3 u = p - T;
  const RVec kdotu = grid.k * u;
  return ((grid.disp - kdotu).cast<Complex>().array() * f.array()).matrix() -
         G.dot(u).cast<Complex>();
}

double energy_squeeze(const MomentumGrid& grid, double g, const Vec3& p,
                      const Vec& f, const Mat& r) {
  check_field(grid, f, "energy_squeeze");
  check_kernel(grid, r, "energy_squeeze");
  const QuasifreeState st = state_from_squeeze(f, r);
  return assemble(grid, g, p, st.f, st.gamma, st.t).bd.total;
}

SqueezeGradient grad_squeeze(const MomentumGrid& grid, double g, const Vec3& p,
                             const Vec& f, const Mat& r, double* energy_out) {
  check_field(grid, f, "grad_squeeze");
  check_kernel(grid, r, "grad_squeeze");
  if (symmetry_defect(r) > kSymmetryTol)
    throw std::invalid_argument("grad_squeeze: r must be complex symmetric");
  const int n = grid.size();

  const bool at_origin = (r.norm() == 0.0);
  RMat V;
  RVec d;
  if (!at_origin) {
    Eigen::SelfAdjointEigenSolver<RMat> es(squeeze_real_rep(r));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("grad_squeeze: eigensolver failed");
    V = es.eigenvectors();
    d = es.eigenvalues();
  }

  Mat gamma, t;
  if (at_origin) {
    gamma = Mat::Zero(n, n);
    t = Mat::Zero(n, n);
  } else {
    squeeze_gamma_t(V, d, gamma, t);
  }

  const Assembly A = assemble(grid, g, p, f, gamma, t);
  if (energy_out) *energy_out = A.bd.total;

  SqueezeGradient out;

  // f-gradient: (|k|^2/2 + |k| - k.u) f + sum_j k_j (gamma phi_j)
  //             + sum_j k_j (t conj(phi_j)) - u.G + (k.G)/2
  out.f = ((grid.disp - A.kdotu).cast<Complex>().array() * f.array()).matrix();
  for (int j = 0; j < 3; ++j) {
    const Vec mixed = gamma * A.phi[j] + t * A.phi[j].conjugate();
    out.f.array() += grid.k.col(j).array().cast<Complex>() * mixed.array();
  }
  out.f -= A.G.dot(A.u).cast<Complex>();
  RVec kg = RVec::Zero(n);
  for (int j = 0; j < 3; ++j) kg += grid.k.col(j).cwiseProduct(A.G.comp[j]);
  out.f += (0.5 * kg).cast<Complex>();  // vanishes for transversal G

  // partials with respect to gamma (Hermitian) and t (symmetric)
  Mat Wg = gamma.cwiseProduct(A.KK.cast<Complex>());
  Wg.diagonal() += (grid.disp - A.kdotu).cast<Complex>();
  Mat Phimat = Mat::Zero(n, n);
  for (int j = 0; j < 3; ++j) {
    Wg.noalias() += A.phi[j] * A.phi[j].adjoint();
    Phimat.noalias() += A.phi[j] * A.phi[j].transpose();
  }
  const Mat Wt = 0.5 * (t.cwiseProduct(A.KK.cast<Complex>()) + Phimat);

  if (at_origin) {
    // gamma(r) is second order at r = 0 and t'(0) = id, so the r-gradient
    // is just Wt.
    out.r = 0.5 * (Wt + Wt.transpose().eval());
    return out;
  }

  // pull back through gamma = sinh^2(rhat), t = sinh(rhat) cosh(rhat) on the
  // eigensystem of the real representation (divided differences of the
  // spectral functions; the t-part reuses that W_t's antilinear
  // representation is squeeze_real_rep(Wt))
  const int m = 2 * n;
  RMat Wgrep(m, m);
  Wgrep.topLeftCorner(n, n) = Wg.real();
  Wgrep.topRightCorner(n, n) = -Wg.imag();
  Wgrep.bottomLeftCorner(n, n) = Wg.imag();
  Wgrep.bottomRightCorner(n, n) = Wg.real();
  const RMat Mt = squeeze_real_rep(Wt);

  const RVec sh = d.array().sinh();
  const RVec ch = d.array().cosh();
  const RVec hc = sh.array().square();
  const RVec hs = (sh.array() * ch.array()).matrix();
  RMat Kc(m, m), Ks(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double dd = d(i) - d(j);
      if (std::abs(dd) < 1e-10) {
        Kc(i, j) = 2.0 * sh(i) * ch(i);
        Ks(i, j) = ch(i) * ch(i) + sh(i) * sh(i);
      } else {
        Kc(i, j) = (hc(i) - hc(j)) / dd;
        Ks(i, j) = (hs(i) - hs(j)) / dd;
      }
    }
  }

  const RMat inner = 0.5 * Kc.cwiseProduct(V.transpose() * Wgrep * V) +
                     Ks.cwiseProduct(V.transpose() * Mt * V);
  const RMat GR = V * inner * V.transpose();

  // project the real-representation gradient back to a symmetric kernel
  const RMat Ag = 0.5 * (GR.topLeftCorner(n, n) - GR.bottomRightCorner(n, n));
  const RMat Bg = 0.5 * (GR.topRightCorner(n, n) + GR.bottomLeftCorner(n, n));
  out.r.resize(n, n);
  out.r.real() = 0.5 * (Ag + Ag.transpose());
  out.r.imag() = 0.5 * (Bg + Bg.transpose());
  return out;
}

double hessian_form_at_origin(const MomentumGrid& grid, double g, const Vec3& p,
                              const Vec& f, const Mat& r) {
  check_field(grid, f, "hessian_form_at_origin");
  check_kernel(grid, r, "hessian_form_at_origin");
  if (symmetry_defect(r) > kSymmetryTol)
    throw std::invalid_argument("hessian_form_at_origin: r must be complex symmetric");
  const CouplingField G = coupling_field(grid, g);
  const RVec kdotp = grid.k * p;

  double q = ((grid.disp - kdotp).array() * f.array().abs2()).sum();

  for (int j = 0; j < 3; ++j) {
    const Vec kf = f.cwiseProduct(grid.k.col(j).cast<Complex>());
    const Vec rkf = r.conjugate() * kf;
    q += 2.0 * (G.comp[j].array() * rkf.real().array()).sum();
    const double re = 2.0 * (f.real().array() * G.comp[j].array()).sum();
    q += 0.5 * re * re;
    q += (r * G.comp[j].cast<Complex>()).squaredNorm();
  }

  const RMat rabs2 = r.cwiseAbs2();
  const RMat KK = grid.k * grid.k.transpose();
  q += 0.5 * rabs2.cwiseProduct(KK).sum();
  const RVec wrow = (0.5 * grid.kmag.array().square() + grid.kmag.array() -
                     kdotp.array())
                        .matrix();
  q += (rabs2.rowwise().sum().array() * wrow.array()).sum();
  return q;
}

}  // namespace pfbhf
