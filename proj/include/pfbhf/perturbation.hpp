#pragma once

#include "pfbhf/grid.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! Fourth-order prediction of the ground-state energy at small (g, p).
struct PerturbativeSummary {
  double e_vacuum = 0.0;  //!< |p|^2/2 + |G|^2/2
  double quad_p = 0.0;    //!< p.G* (|k|^2/2 + |k|)^{-1} G.p  (>= 0)
  double quart_g = 0.0;   //!< (G^2)* S^{-1} (G^2) / 2        (>= 0)
  double e_pred = 0.0;    //!< e_vacuum - quad_p - quart_g
};

//! Leading field: f_a = (p . G_a) / (|k_a|^2/2 + |k_a|); real-valued.
Vec pert_f(const MomentumGrid& grid, double g, const Vec3& p);

//! Leading pair kernel: r_ab = -(G_a . G_b) / S_ab with
//! S_ab = k_a . k_b + D_a + D_b; symmetric, real-valued.
Mat pert_r(const MomentumGrid& grid, double g);

//! Direction-averaged grid value of p^ . G* (|k|^2/2 + |k|)^{-1} G . p^
//! per unit coupling squared (averaged over the three axis directions).
double c22_quadrature(const MomentumGrid& grid);

//! Closed-form candidate (2 pi^2 - 8 pi / 3) ln((cutoff+2)/(sigma+2)).
//! Kept for comparison; the quadrature value is the binding one.
double c22_closed_form(double sigma, double cutoff);

//! Reduction of the same operator expression to one radial integral:
//! (16 pi / 3) ln((cutoff+2)/(sigma+2)).
double c22_reduced(double sigma, double cutoff);

//! Reduced 3D quadrature of (G^2)* S^{-1} (G^2) / 2 per unit g^4 over
//! (r1, r2, cos theta) with the angular weight 1 + cos^2 theta; positive
//! for all 0 < sigma < cutoff.  Gauss-Legendre with n_quad >= 8 per axis.
double c40_quadrature(double sigma, double cutoff, int n_quad);

//! The same bilinear form in the discrete node basis at unit coupling:
//! sum_ab (G_a . G_b)^2 / (2 S_ab).
double c40_grid_form(const MomentumGrid& grid);

//! Assemble the fourth-order summary on the given grid; the corrections
//! use the grid-basis forms so the prediction matches the discretized
//! minimization to fifth order in (g, |p|).
PerturbativeSummary energy_fourth_order(const MomentumGrid& grid, double g,
                                        const Vec3& p);

}  // namespace pfbhf
