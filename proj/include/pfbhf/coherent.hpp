#pragma once

#include <vector>

#include "pfbhf/grid.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! Result of the fixed-point solve over coherent states.
struct CoherentReport {
  Vec f;
  Vec3 u = Vec3::Zero();
  double energy = 0.0;
  int iterations = 0;
  double residual = 0.0;  //!< |Psi(u) - u| at the last step
  //! per-step ratios |u_{m+1} - u_m| / |u_m - u_{m-1}|
  std::vector<double> contraction_trace;
  bool converged = false;
};

//! Phi_u(a) = u.G_a / (|k_a|^2/2 + |k_a| - k_a.u); real-valued.
//! Throws std::domain_error unless |u| < 1 (which keeps the denominator
//! above (1 - |u|)|k_a|).
Vec phi_u(const MomentumGrid& grid, double g, const Vec3& u);

//! Psi(u) = p - Phi_u* k Phi_u - 2 Re(Phi_u* G).  Same domain as phi_u.
Vec3 psi_map(const MomentumGrid& grid, double g, const Vec3& p, const Vec3& u);

//! Plain Picard iteration u <- Psi(u) from u0 = p until |Psi(u) - u| <= tol.
//! Returns a non-converged report when max_iter is exhausted; throws
//! std::runtime_error if an iterate leaves the unit ball.  On success
//! f = Phi_u and u = p - f* k f - 2 Re(f* G) both hold to tol.
CoherentReport solve_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                              double tol = 1e-10, int max_iter = 500);

//! Anderson-accelerated variant (window `depth`); faster on slowly
//! contracting problems but carries no contraction certificate, so it never
//! substitutes for solve_coherent in validation.
CoherentReport solve_coherent_anderson(const MomentumGrid& grid, double g,
                                       const Vec3& p, double tol = 1e-10,
                                       int max_iter = 500, int depth = 3);

//! x = (diag + factor * sum_j G_j G_j^T)^{-1} v through the 3x3 capacitance
//! system (rank-3 Woodbury update of a positive diagonal).
//! Throws std::invalid_argument unless diag > 0, std::runtime_error when the
//! capacitance matrix is singular.
Vec rank3_resolvent_apply(const RVec& diag, const CouplingField& G, const Vec& v,
                          double factor);

//! Second-order expansion of the coherent minimum in p:
//!   E(0) - (G.p)*(|k|^2/2 + |k| + 2 sum_j G_j G_j^T)^{-1} (G.p)
//! with E(0) = |p|^2/2 + |G|^2/2; accurate to O(|p|^3).
double coherent_p2_expansion(const MomentumGrid& grid, double g, const Vec3& p);

}  // namespace pfbhf
