#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "pfbhf/types.hpp"

namespace pfbhf {

//! Product quadrature over the momentum shell sigma <= |k| <= cutoff times
//! two transverse polarizations.  Weights carry the r^2 Jacobian and the
//! angular weight, so sums over nodes are plain Euclidean inner products
//! ("orthonormalized coordinates": a field f is stored as sqrt(w_a) f(k_a)).
struct MomentumGrid {
  double sigma = 0.0;
  double cutoff = 0.0;
  int n_radial = 0;
  int n_angular = 0;

  RMat k;                 // N x 3 node momenta
  RVec kmag;              // |k_a|
  RVec weight;            // quadrature weight of the node
  RVec sqrt_w;            // cached sqrt(weight)
  RVec disp;              // |k|^2/2 + |k|
  Eigen::VectorXi pol;    // +1 or -1
  RMat eps;               // N x 3, polarization vector attached to the node

  int size() const { return static_cast<int>(kmag.size()); }
};

//! Right-handed transverse frame (eps_plus, eps_minus) for a unit vector khat:
//! eps_plus = normalize(zhat x khat), with xhat as fallback axis near the
//! poles (|zhat x khat| < 1e-8); eps_minus = khat x eps_plus.
//! Throws std::invalid_argument unless | |khat| - 1 | <= 1e-12.
std::pair<Vec3, Vec3> polarization_frame(const Vec3& khat);

//! Gauss-Legendre radial rule (n_radial points on [sigma, cutoff]) times a
//! published octahedrally symmetric angular rule with n_angular points
//! (one of 6, 14, 26, 38, 50), times both polarizations.
//! Requires sigma >= 0, cutoff > sigma, n_radial >= 2.
MomentumGrid build_grid(double sigma, double cutoff, int n_radial, int n_angular);

//! Coupling coefficients G_j(a) = sqrt(w_a) g eps_j(a) / sqrt(|k_a|), one
//! real vector per Cartesian component.  Transversality k.G = 0 holds
//! node-wise by construction.
struct CouplingField {
  double g = 0.0;
  std::array<RVec, 3> comp;

  int size() const { return static_cast<int>(comp[0].size()); }
  //! sum_j ||G_j||^2
  double norm2() const;
  //! (u . G)(a) = sum_j u_j G_j(a), a real vector
  RVec dot(const Vec3& u) const;
};

CouplingField coupling_field(const MomentumGrid& grid, double g);

//! 4 pi g^2 (cutoff^2 - sigma^2): the exact value of ||G||^2.
double analytic_g_norm2(double g, double sigma, double cutoff);

//! Same nodes and weights, every polarization pair rotated in its transverse
//! plane by an independent uniform angle.  Gauge test helper.
MomentumGrid randomize_frames(const MomentumGrid& grid, std::uint64_t seed);

//! First d nodes of the grid with weights rescaled to preserve the total
//! weight; used to build few-mode systems for the truncated-Fock oracle.
MomentumGrid select_nodes(const MomentumGrid& grid, int d);

//! Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, RVec& x, RVec& w);

//! Octahedral angular rule with n points (6, 14, 26, 38, 50; polynomial
//! degrees 3, 5, 7, 9, 11).  Weights sum to 4 pi.
void spherical_rule(int n, RMat& pts, RVec& w);

}  // namespace pfbhf
