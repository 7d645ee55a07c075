#pragma once

#include <vector>

#include "pfbhf/grid.hpp"
#include "pfbhf/quasifree.hpp"
#include "pfbhf/types.hpp"

namespace pfbhf {

enum class DescentStrategy {
  gradient,                // steepest descent with Armijo backtracking
  newton_preconditioned,   // diagonal of the origin Hessian as metric
};

//! Result of the descent over (f, r).  The product norm used throughout is
//! |(f, r)|_X^2 = |f|^2 + |r|_F^2.
struct VariationalReport {
  Vec f;
  Mat r;
  QuasifreeState state;  //!< state_from_squeeze(f, r) at termination
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;          //!< accepted descent steps
  bool inside_ball = false;    //!< |(f, r)|_X <= r_estimate
  double r_estimate = 0.0;     //!< largest probed radius with convex Hessian
  bool certified = false;      //!< smallness gate |G|^2 <= sigma/2
  bool coercive_hypothesis = false;  //!< |p|^2/2 + |G|^2/2 < sigma * r_estimate^2
  std::vector<double> energy_trace;  //!< energy after each accepted step
};

//! Minimize the quasifree energy over (f, r) starting from (0, 0).
//! Armijo backtracking (c = 1e-4, halving, unit initial step); terminates
//! when the X-norm of the gradient drops to tol.  A report with
//! grad_norm > tol means the iteration budget ran out.  Throws
//! std::invalid_argument for sigma = 0 grids or bad tol/max_iter, and
//! std::runtime_error if the line search cannot decrease the energy.
VariationalReport minimize_quasifree(
    const MomentumGrid& grid, double g, const Vec3& p, double tol = 1e-8,
    int max_iter = 500,
    DescentStrategy strategy = DescentStrategy::newton_preconditioned);

//! Minimum over random samples of E(f, r) / (sigma (|f|^2 + |r|_F^2)).
//! Sample scales sweep 0.01 .. 10 so the bound is probed far outside the
//! perturbative ball; the ratio is expected >= 1 - 1e-8 for every sigma > 0.
double coercivity_check(const MomentumGrid& grid, double g, const Vec3& p,
                        int samples, std::uint64_t seed);

//! Minimum Rayleigh quotient of the energy Hessian: exact quadratic form at
//! the origin plus central second differences at points of a small ball,
//! all divided by the squared X-norm of the direction.  Expected
//! >= sigma/4 - 1e-6 in the small-coupling regime.  Requires |p| <= 1/2.
double convexity_check(const MomentumGrid& grid, double g, const Vec3& p,
                       int samples, std::uint64_t seed);

//! Largest radius from a fixed ladder at which sampled second differences
//! of the energy stay >= sigma/4 - 1e-6; 0 when even the smallest fails.
double estimate_convexity_radius(const MomentumGrid& grid, double g,
                                 const Vec3& p, int directions,
                                 std::uint64_t seed);

}  // namespace pfbhf
