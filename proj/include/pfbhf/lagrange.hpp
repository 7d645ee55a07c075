#pragma once

#include <vector>

#include "pfbhf/grid.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! Variables of the self-consistent multiplier system.  gamma is PSD with
//! operator norm < 1/2 in the certified regime, lambda Hermitian.
struct LagrangeState {
  Vec f;
  Mat t;       //!< pair field (symmetric)
  Mat gamma;
  Mat lambda;
  Vec3 u = Vec3::Zero();
};

//! Norms of the five equation residuals; all nonnegative.
struct ResidualSet {
  double res_f = 0.0;
  double res_alpha = 0.0;
  double res_gamma = 0.0;
  double res_lambda = 0.0;
  double res_u = 0.0;
  double max() const;
};

struct LagrangeReport {
  LagrangeState state;
  ResidualSet residuals;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  //! per-sweep ratios |(f, lambda)_{n+1} - (f, lambda)_n| step norms
  std::vector<double> contraction_trace;
};

//! Unique solution of A X + X A = B for Hermitian positive definite A,
//! computed in A's eigenbasis (entrywise division by a_i + a_j).  X is
//! Hermitian when B is; the residual is <= 1e-10 |B|_F.  Throws
//! std::invalid_argument for shape/Hermiticity violations and
//! std::domain_error when min eig(A) <= 0.
Mat sylvester_solve(const Mat& A, const Mat& B);

//! Solve sum_j K_j x K_j + lambda x + x lambda^T = rhs by preconditioned
//! conjugate gradients using only operator applications (K_j = diagonal
//! multiplication by the j-th momentum component).  Stops at residual
//! <= tol |rhs|_F; the output is symmetric whenever rhs is.  Throws
//! std::domain_error if the operator is detected indefinite (CG curvature
//! <= 0) and std::runtime_error if the iteration stalls.  `warm` seeds the
//! initial guess.
Mat pair_solve(const MomentumGrid& grid, const Mat& lambda, const Mat& rhs,
               double tol, const Mat* warm = nullptr);

//! One-body operator M(gamma, u) = |k|^2/2 + |k| - k.u + k.gamma k.
RMat mass_operator_diag(const MomentumGrid& grid, const Vec3& u);

//! Multiplier consistent with the gamma equation:
//! (1/2 + gamma) lambda + lambda (1/2 + gamma) = M(gamma, u) + sum_j phi_j phi_j*.
Mat reconstruct_lambda(const MomentumGrid& grid, double g, const Vec3& p,
                       const Vec& f, const Mat& gamma, const Vec3& u);

//! Norms of the residuals of the five coupled equations at the given state.
ResidualSet lagrange_residuals(const MomentumGrid& grid, double g, const Vec3& p,
                               const LagrangeState& state);

//! Self-consistent sweep alpha -> gamma -> u -> f -> lambda from f = 0,
//! lambda = diag(|k|^2/2 + |k| - p.k).  Converged when every residual is
//! <= tol; an exhausted budget returns converged = false.  Throws
//! std::domain_error when a positivity guard fails (|u| >= 1/2 or the mass
//! operator loses definiteness).
LagrangeReport lagrange_iterate(const MomentumGrid& grid, double g, const Vec3& p,
                                double tol = 1e-8, int max_iter = 200);

}  // namespace pfbhf
