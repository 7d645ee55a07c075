#pragma once

#include <cstdint>

#include "pfbhf/grid.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! r = U diag(s) U^T with U unitary and s >= 0 sorted descending.
struct TakagiFactorization {
  Mat U;
  RVec s;
};

//! Takagi factorization of a complex symmetric matrix.  Computed from the
//! eigendecomposition of the real symmetric representation
//! [[Re r, Im r], [Im r, -Re r]] of the associated antilinear kernel
//! z -> r conj(z); positive-spectrum eigenvectors (x, y) give Takagi columns
//! u = x + i y directly, which stays well-defined inside degenerate clusters.
//! Column signs are fixed deterministically (largest-modulus entry made
//! positive-real; s > 0 columns only admit a sign).
//! Throws std::invalid_argument when r is not square-symmetric.
TakagiFactorization takagi(const Mat& r);

//! Displacement f, one-body density gamma (Hermitian PSD), pairing matrix t
//! (complex symmetric), in orthonormalized grid coordinates.
struct QuasifreeState {
  Vec f;
  Mat gamma;
  Mat t;
  bool pure = true;
};

//! The pure quasifree state generated by displacement f and squeeze kernel r:
//! gamma = U diag(sinh^2 s) U*, t = U diag(sinh s cosh s) U^T on the Takagi
//! system of r.
QuasifreeState state_from_squeeze(const Vec& f, const Mat& r);

//! || gamma + gamma^2 - t t* ||_F; zero exactly on pure states.
double pureness_residual(const Mat& gamma, const Mat& t);

//! The unique Hermitian PSD solution of gamma + gamma^2 = t t*.
Mat gamma_from_pair(const Mat& t);

//! Deterministic Gaussian sample of (f, r), complex entry std = scale,
//! returned as the generated pure state.
QuasifreeState sample_pure(std::uint64_t seed, double scale, const MomentumGrid& grid);

//! Pure sample plus a random positive diagonal added to gamma (half-normal,
//! std = mix_scale); keeps the generalized one-body density admissible.
//! mix_scale = 0 reproduces the pure sample's moments.
QuasifreeState sample_mixed(std::uint64_t seed, double scale, const MomentumGrid& grid,
                            double mix_scale);

//! prod_j 1/(1 - c_j) for 0 <= c_j < 1; the Fock-space trace of a product
//! Gibbs factor.  Throws std::domain_error outside [0, 1).
double gibbs_trace(const RVec& c);

//! Generalized one-body density [[gamma, t], [t*, 1 + conj(gamma)]]; PSD for
//! admissible states.
Mat pair_block_matrix(const Mat& gamma, const Mat& t);

// --- real-representation plumbing shared with the variational solver ---

//! [[Re r, Im r], [Im r, -Re r]], the real symmetric matrix of the antilinear
//! kernel z -> r conj(z) on C^N viewed as R^{2N}.
RMat squeeze_real_rep(const Mat& r);

//! gamma and t of the pure state of squeeze kernel r, given the ascending
//! eigensystem (V, d) of squeeze_real_rep(r).
void squeeze_gamma_t(const RMat& V, const RVec& d, Mat& gamma, Mat& t);

}  // namespace pfbhf
