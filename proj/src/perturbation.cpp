#include "pfbhf/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfbhf {

namespace {

//! S_ab = k_a . k_b + D_a + D_b, the pair-mode energy denominator.
RMat pair_denominator(const MomentumGrid& grid) {
  RMat s = grid.k * grid.k.transpose();
  s.rowwise() += grid.disp.transpose();
  s.colwise() += grid.disp;
  return s;
}

//! sum_j G_j(a) G_j(b) as a dense kernel.
RMat coupling_gram(const CouplingField& G) {
  RMat gram = G.comp[0] * G.comp[0].transpose();
  gram += G.comp[1] * G.comp[1].transpose();
  gram += G.comp[2] * G.comp[2].transpose();
  return gram;
}

}  // namespace

Vec pert_f(const MomentumGrid& grid, double g, const Vec3& p) {
  const CouplingField G = coupling_field(grid, g);
  return (G.dot(p).array() / grid.disp.array()).cast<Complex>().matrix();
}

Mat pert_r(const MomentumGrid& grid, double g) {
  const CouplingField G = coupling_field(grid, g);
  return (-coupling_gram(G).array() / pair_denominator(grid).array())
      .cast<Complex>()
      .matrix();
}

double c22_quadrature(const MomentumGrid& grid) {
  const CouplingField G = coupling_field(grid, 1.0);
  double acc = 0.0;
  for (int j = 0; j < 3; ++j)
    acc += (G.comp[j].array().square() / grid.disp.array()).sum();
  return acc / 3.0;
}

double c22_closed_form(double sigma, double cutoff) {
  const double pi = std::numbers::pi;
  return (2.0 * pi * pi - 8.0 * pi / 3.0) *
         std::log((cutoff + 2.0) / (sigma + 2.0));
}

double c22_reduced(double sigma, double cutoff) {
  const double pi = std::numbers::pi;
  return (16.0 * pi / 3.0) * std::log((cutoff + 2.0) / (sigma + 2.0));
}

double c40_quadrature(double sigma, double cutoff, int n_quad) {
  if (!(0.0 < sigma && sigma < cutoff))
    throw std::invalid_argument("c40_quadrature: need 0 < sigma < cutoff");
  if (n_quad < 8)
    throw std::invalid_argument("c40_quadrature: need n_quad >= 8 per axis");

  RVec xr, wr, xc, wc;
  gauss_legendre(n_quad, sigma, cutoff, xr, wr);
  gauss_legendre(n_quad, -1.0, 1.0, xc, wc);
  const double pi = std::numbers::pi;

  // 4 pi^2 Int r1 r2 (1 + c^2) / (r1 r2 c + D(r1) + D(r2)) dc dr1 dr2
  double acc = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    const double r1 = xr(i);
    const double d1 = 0.5 * r1 * r1 + r1;
    for (int j = 0; j < n_quad; ++j) {
      const double r2 = xr(j);
      const double d2 = 0.5 * r2 * r2 + r2;
      double inner = 0.0;
      for (int m = 0; m < n_quad; ++m) {
        const double c = xc(m);
        inner += wc(m) * (1.0 + c * c) / (r1 * r2 * c + d1 + d2);
      }
      acc += wr(i) * wr(j) * r1 * r2 * inner;
    }
  }
  return 4.0 * pi * pi * acc;
}

double c40_grid_form(const MomentumGrid& grid) {
  const CouplingField G = coupling_field(grid, 1.0);
  const RMat gram = coupling_gram(G);
  const RMat s = pair_denominator(grid);
  return 0.5 * (gram.array().square() / s.array()).sum();
}

PerturbativeSummary energy_fourth_order(const MomentumGrid& grid, double g,
                                        const Vec3& p) {
  const CouplingField G = coupling_field(grid, g);
  PerturbativeSummary out;
  out.e_vacuum = 0.5 * p.squaredNorm() + 0.5 * G.norm2();
  out.quad_p = (G.dot(p).array().square() / grid.disp.array()).sum();
  const RMat gram = coupling_gram(G);
  out.quart_g = 0.5 * (gram.array().square() / pair_denominator(grid).array()).sum();
  out.e_pred = out.e_vacuum - out.quad_p - out.quart_g;
  return out;
}

}  // namespace pfbhf
