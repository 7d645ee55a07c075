#pragma once

#include "pfbhf/grid.hpp"
#include "pfbhf/quasifree.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

//! Contributions to the quasifree energy, grouped the way the positivity
//! bounds are organized:
//!   total = (kinetic_square + field_quadratic + pairing_group)/2 + photon_energy.
struct EnergyBreakdown {
  double total = 0.0;
  //! |Tr[gamma k] + f* k f + 2 Re(f* G) - p|^2
  double kinetic_square = 0.0;
  //! Tr[gamma k . gamma k] + sum_ab |t_ab|^2 k_a.k_b + Tr[|k|^2 gamma]
  double field_quadratic = 0.0;
  //! 2 Re sum_ab conj(t_ab) phi_a.phi_b + sum_j phi_j*(2 gamma + 1) phi_j
  double pairing_group = 0.0;
  //! Tr[gamma |k|] + f* |k| f
  double photon_energy = 0.0;
};

//! u = p - Tr[gamma k] - f* k f - 2 Re(f* G).
Vec3 dressed_momentum(const MomentumGrid& grid, double g, const Vec3& p,
                      const Vec& f, const Mat& gamma);

//! Quasifree energy at coupling constant g and total momentum p, with
//! phi_j = G_j + k_j f throughout.  Throws std::invalid_argument when the
//! state dimensions do not match the grid.
EnergyBreakdown energy(const MomentumGrid& grid, double g, const Vec3& p,
                       const QuasifreeState& state);

//! Same groups as energy(), intended for sign checks: kinetic_square and
//! photon_energy are nonnegative as written; field_quadratic plus
//! |Tr[gamma k]|^2 is nonnegative for admissible states; the pairing cross
//! term is dominated in modulus by the phi*(2 gamma + 1) phi piece.
EnergyBreakdown positivity_terms(const MomentumGrid& grid, double g, const Vec3& p,
                                 const QuasifreeState& state);

//! Energy over coherent states:
//!   |G|^2/2 + |f* k f + 2 Re(f* G) - p|^2/2 + f*(|k|^2/2 + |k|) f.
//! Equals energy() at the state (f, 0, 0).
double energy_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                       const Vec& f);

//! Gradient of energy_coherent in the convention dE = 2 Re <grad, df>:
//!   (|k|^2/2 + |k| - k.u) f - u.G  at  u = dressed_momentum(f, gamma = 0).
Vec grad_coherent(const MomentumGrid& grid, double g, const Vec3& p,
                  const Vec& f);

//! Energy of the pure state generated by displacement f and squeeze kernel r.
double energy_squeeze(const MomentumGrid& grid, double g, const Vec3& p,
                      const Vec& f, const Mat& r);

//! Gradient of energy_squeeze; both slots use the dE = 2 Re <grad, d.>
//! convention, and r (symmetric) yields a symmetric r-gradient.
struct SqueezeGradient {
  Vec f;
  Mat r;
};

//! Chain rule through gamma = sinh^2(rhat), t = sinh(rhat) cosh(rhat),
//! evaluated with divided differences on the spectrum of the real symmetric
//! representation of rhat; the divided difference degenerates to the
//! derivative when two eigenvalues are closer than 1e-10.  Optionally
//! reports the energy at (f, r) through energy_out, sharing the
//! eigendecomposition.
SqueezeGradient grad_squeeze(const MomentumGrid& grid, double g, const Vec3& p,
                             const Vec& f, const Mat& r,
                             double* energy_out = nullptr);

//! Second-order coefficient of t -> energy_squeeze(t f, t r) at t = 0:
//!   2 Re<rhat k f, G> + (1/2) sum_j (2 Re f*G_j)^2 + sum_j |r G_j|^2
//!   + sum_ab |r_ab|^2 (k_a.k_b/2 + |k_a|^2/2 + |k_a| - k_a.p)
//!   + f*(|k|^2/2 + |k| - k.p) f.
//! Strictly convex with constant >= sigma/4 for |p| <= 1/2 and small g.
double hessian_form_at_origin(const MomentumGrid& grid, double g, const Vec3& p,
                              const Vec& f, const Mat& r);

}  // namespace pfbhf
