#pragma once

#include <vector>

#include "pfbhf/grid.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! Truncated Fock space over a handful of photon modes: occupation-number
//! basis with total occupancy <= nmax, enumerated shell by shell (first mode
//! descending inside a shell), so index 0 is the vacuum.  The annihilation
//! matrices satisfy the CCR exactly on the total < nmax block; states
//! touching the top shell see the truncation.
struct FockContext {
  int modes = 0;
  int nmax = 0;
  int dim = 0;
  Eigen::MatrixXi occ;       // dim x modes occupation numbers
  std::vector<RMat> ladder;  // annihilation matrix per mode, entries sqrt(n)
};

//! Requires 1 <= d <= 4 and 1 <= nmax <= 10 (dimension budget of a dense
//! brute-force oracle); throws std::invalid_argument otherwise.
//! dim = C(d + nmax, d).
FockContext build_fock(int d, int nmax);

//! The full Hamiltonian 1/2 (P + A - p)^2 + H_f as a dense Hermitian matrix
//! on the truncated space: P_j = sum_a k_a(j) n_a, A_j = sum_a G_j(a)
//! (a_a + a_a^dag), H_f = sum_a |k_a| n_a, the square formed by matrix
//! multiplication (so the top shell feels the cutoff).  The grid must have
//! exactly ctx.modes nodes; throws std::invalid_argument otherwise.
Mat fock_hamiltonian(const FockContext& ctx, const MomentumGrid& grid,
                     double g, const Vec3& p);

//! Normalized truncation of the displaced squeezed vacuum
//!   Psi = exp(sum_a f_a a_a^dag - h.c.) exp(1/2 sum_ab r_ab a_a^dag a_b^dag
//!         - h.c.) Omega.
//! The exponent sign is fixed so the second moments reproduce
//! state_from_squeeze: <a_b^dag a_a> = gamma_ab and <a_a a_b> = t_ab (for one
//! real mode, <a a> = + sinh s cosh s).  r must be symmetric; sizes must
//! match ctx.modes; throws std::invalid_argument otherwise.
Vec fock_quasifree_vector(const FockContext& ctx, const Vec& f, const Mat& r);

//! <Psi | H_{g,p} | Psi> for the truncated quasifree vector; the brute-force
//! counterpart of energy_squeeze, converging to it as nmax grows.
double fock_oracle_energy(const FockContext& ctx, const MomentumGrid& grid,
                          double g, const Vec3& p, const Vec& f, const Mat& r);

}  // namespace pfbhf
