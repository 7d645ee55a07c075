#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "pfbhf/energy.hpp"
#include "pfbhf/grid.hpp"
#include "pfbhf/quasifree.hpp"

using namespace pfbhf;

namespace {

Vec random_field(std::uint64_t seed, int n, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale);
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(nd(rng), nd(rng));
  return f;
}

Mat random_symmetric(std::uint64_t seed, int n, double scale) {
  std::mt19937_64 rng(seed ^ 0x5bf03635ULL);
  std::normal_distribution<double> nd(0.0, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  return 0.5 * (m + m.transpose()).eval();
}

QuasifreeState vacuum_state(int n) {
  QuasifreeState st;
  st.f = Vec::Zero(n);
  st.gamma = Mat::Zero(n, n);
  st.t = Mat::Zero(n, n);
  st.pure = true;
  return st;
}

std::array<Vec, 3> phi_vectors(const MomentumGrid& grid, const CouplingField& G,
                               const Vec& f) {
  std::array<Vec, 3> phi;
  for (int j = 0; j < 3; ++j)
    phi[j] = G.comp[j].cast<Complex>() + f.cwiseProduct(grid.k.col(j).cast<Complex>());
  return phi;
}

}  // namespace

TEST_CASE("vacuum energy and trivial limits") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 3, 14);
  const int n = grid.size();
  const Vec3 p(0.1, -0.2, 0.05);

  const EnergyBreakdown vac = energy(grid, 0.1, p, vacuum_state(n));
  const double expected = 0.5 * p.squaredNorm() + 0.5 * analytic_g_norm2(0.1, 1.0, 2.0);
  CHECK(vac.total == doctest::Approx(expected).epsilon(1e-13));
  CHECK(vac.kinetic_square == doctest::Approx(p.squaredNorm()).epsilon(1e-13));
  CHECK(vac.field_quadratic == 0.0);
  CHECK(vac.photon_energy == 0.0);

  const EnergyBreakdown free = energy(grid, 0.0, Vec3(0.2, 0, 0), vacuum_state(n));
  CHECK(free.total == doctest::Approx(0.02).epsilon(1e-14));

  QuasifreeState bad = vacuum_state(n);
  bad.f = Vec::Zero(n - 1);
  CHECK_THROWS_AS(energy(grid, 0.1, p, bad), std::invalid_argument);
}

TEST_CASE("energy groups recomputed independently, with real total") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const double g = 0.2;
  const Vec3 p(0.1, 0.05, -0.2);
  const CouplingField G = coupling_field(grid, g);

  for (std::uint64_t seed : {41u, 42u}) {
    const QuasifreeState st = sample_mixed(seed, 0.25, grid, seed == 42u ? 0.3 : 0.0);
    const EnergyBreakdown bd = energy(grid, g, p, st);

    const auto phi = phi_vectors(grid, G, st.f);
    const Vec3 u = dressed_momentum(grid, g, p, st.f, st.gamma);
    Complex e = 0.0;
    for (int j = 0; j < 3; ++j) {
      const Mat Kg = grid.k.col(j).cast<Complex>().asDiagonal() * st.gamma;
      const Mat Kt = grid.k.col(j).cast<Complex>().asDiagonal() * st.t;
      e += 0.5 * (u(j) * u(j) + (Kg * Kg).trace() + (Kt * Kt.conjugate()).trace());
      // the cross term enters through its real part (it pairs with its
      // conjugate in the expectation), so only Re contributes
      e += (phi[j].transpose() * st.t.conjugate() * phi[j]).value().real();
      e += 0.5 * (2.0 * phi[j].dot(st.gamma * phi[j]) + phi[j].squaredNorm());
    }
    e += 0.5 * (grid.kmag.array().square().cast<Complex>() *
                st.gamma.diagonal().array())
                   .sum();
    e += (grid.kmag.array().cast<Complex>() * st.gamma.diagonal().array()).sum();
    e += (grid.kmag.array() * st.f.array().abs2()).sum();

    CHECK(std::abs(e.imag()) <= 1e-12 * (1.0 + std::abs(e.real())));
    CHECK(bd.total == doctest::Approx(e.real()).epsilon(1e-12));
    CHECK(bd.total ==
          doctest::Approx(0.5 * (bd.kinetic_square + bd.field_quadratic +
                                 bd.pairing_group) +
                          bd.photon_energy)
              .epsilon(1e-14));
  }
}

TEST_CASE("sampled states have nonnegative energy and positivity groups") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const double g = 0.15;
  const Vec3 p(0.0, 0.1, 0.2);
  const CouplingField G = coupling_field(grid, g);
  const Vec zero_f = Vec::Zero(grid.size());

  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const QuasifreeState st = sample_mixed(seed, 0.3, grid, (seed % 2) ? 0.0 : 0.25);
    const EnergyBreakdown bd = positivity_terms(grid, g, p, st);
    CHECK(bd.total >= -1e-12);
    CHECK(bd.kinetic_square >= 0.0);
    CHECK(bd.photon_energy >= -1e-12);

    // field group plus |Tr[gamma k]|^2 is nonnegative
    const Vec3 tr_gk = -dressed_momentum(grid, g, Vec3::Zero(), zero_f, st.gamma);
    CHECK(bd.field_quadratic + tr_gk.squaredNorm() >= -1e-10);

    // pairing cross term dominated componentwise
    const auto phi = phi_vectors(grid, G, st.f);
    for (int j = 0; j < 3; ++j) {
      const double cross =
          2.0 * (phi[j].transpose() * st.t.conjugate() * phi[j]).value().real();
      const double dom =
          (2.0 * phi[j].dot(st.gamma * phi[j]) + phi[j].squaredNorm()).real();
      CHECK(std::abs(cross) <= dom + 1e-10);
    }
  }

  // vacuum: groups (0, 0, |G|^2, 0) at p = 0
  const EnergyBreakdown vb =
      positivity_terms(grid, g, Vec3::Zero(), vacuum_state(grid.size()));
  CHECK(vb.kinetic_square == 0.0);
  CHECK(vb.field_quadratic == 0.0);
  CHECK(vb.pairing_group == doctest::Approx(G.norm2()).epsilon(1e-13));
  CHECK(vb.photon_energy == 0.0);
}

TEST_CASE("single-mode squeeze pairing group in closed form") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const double g = 0.3, s = 0.35;
  const CouplingField G = coupling_field(grid, g);
  Mat r = Mat::Zero(grid.size(), grid.size());
  r(0, 0) = s;
  const QuasifreeState st = state_from_squeeze(Vec::Zero(grid.size()), r);
  const EnergyBreakdown bd = energy(grid, g, Vec3::Zero(), st);

  double gg00 = 0.0;
  for (int j = 0; j < 3; ++j) gg00 += G.comp[j](0) * G.comp[j](0);
  const double expected =
      (std::sinh(2 * s) + std::cosh(2 * s) - 1.0) * gg00 + G.norm2();
  CHECK(bd.pairing_group == doctest::Approx(expected).epsilon(1e-12));
  CHECK(bd.pairing_group >= 0.0);
}

TEST_CASE("coherent specialization agrees with the full functional") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const int n = grid.size();
  const double g = 0.2;
  const Vec3 p(0.3, -0.1, 0.2);

  CHECK(energy_coherent(grid, g, p, Vec::Zero(n)) ==
        doctest::Approx(0.5 * p.squaredNorm() + 0.5 * analytic_g_norm2(g, 1.0, 2.0))
            .epsilon(1e-13));

  for (std::uint64_t seed : {9u, 10u, 11u}) {
    const Vec f = random_field(seed, n, 0.4);
    QuasifreeState st = vacuum_state(n);
    st.f = f;
    const double full = energy(grid, g, p, st).total;
    const double coh = energy_coherent(grid, g, p, f);
    CHECK(std::abs(full - coh) <= 1e-12 * (1.0 + std::abs(full)));
  }

  // p = 0: the vacuum is the unique coherent minimizer
  for (std::uint64_t seed : {21u, 22u}) {
    const Vec f = random_field(seed, n, 0.2);
    CHECK(energy_coherent(grid, g, Vec3::Zero(), f) >
          0.5 * analytic_g_norm2(g, 1.0, 2.0));
  }
}

TEST_CASE("dressed momentum special values") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const int n = grid.size();
  const Vec3 p(0.4, 0.1, -0.3);
  const Vec3 u0 = dressed_momentum(grid, 0.2, p, Vec::Zero(n), Mat::Zero(n, n));
  CHECK((u0 - p).norm() == 0.0);

  const int a = 3;
  Mat gamma = Mat::Zero(n, n);
  gamma(a, a) = 1.0;
  const Vec3 ua = dressed_momentum(grid, 0.2, p, Vec::Zero(n), gamma);
  CHECK((ua - (p - Vec3(grid.k.row(a).transpose()))).norm() <= 1e-14);
}

TEST_CASE("grad_coherent closed values and finite differences") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const int n = grid.size();
  const double g = 0.25;
  const Vec3 p(0.2, -0.1, 0.15);
  const CouplingField G = coupling_field(grid, g);

  CHECK(grad_coherent(grid, g, Vec3::Zero(), Vec::Zero(n)).norm() == 0.0);
  const Vec at0 = grad_coherent(grid, g, p, Vec::Zero(n));
  CHECK((at0 + G.dot(p).cast<Complex>()).norm() <= 1e-14);

  const Vec f = random_field(33, n, 0.3);
  const Vec grad = grad_coherent(grid, g, p, f);
  const double h = 1e-5 * (1.0 + f.norm());
  for (int a = 0; a < n; a += 5) {
    Vec fp = f, fm = f;
    fp(a) += h;
    fm(a) -= h;
    const double fd_re =
        (energy_coherent(grid, g, p, fp) - energy_coherent(grid, g, p, fm)) / (2 * h);
    fp = f;
    fm = f;
    fp(a) += Complex(0, h);
    fm(a) -= Complex(0, h);
    const double fd_im =
        (energy_coherent(grid, g, p, fp) - energy_coherent(grid, g, p, fm)) / (2 * h);
    CHECK(fd_re == doctest::Approx(2.0 * grad(a).real()).epsilon(1e-6).scale(1e-2));
    CHECK(fd_im == doctest::Approx(2.0 * grad(a).imag()).epsilon(1e-6).scale(1e-2));
  }
}

TEST_CASE("grad_squeeze at the origin is the pairing source") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const int n = grid.size();
  const double g = 0.2;
  const CouplingField G = coupling_field(grid, g);

  const SqueezeGradient sg =
      grad_squeeze(grid, g, Vec3::Zero(), Vec::Zero(n), Mat::Zero(n, n));
  CHECK(sg.f.norm() <= 1e-14);

  Mat source = Mat::Zero(n, n);
  for (int j = 0; j < 3; ++j)
    source += 0.5 * G.comp[j].cast<Complex>() * G.comp[j].cast<Complex>().transpose();
  CHECK((sg.r - source).norm() <= 1e-13 * (1.0 + source.norm()));
}

TEST_CASE("grad_squeeze matches finite differences of energy_squeeze") {
  const MomentumGrid grid = build_grid(1.0, 2.0, 2, 6);
  const int n = grid.size();
  const double g = 0.2;
  const Vec3 p(0.15, 0.05, -0.1);

  const Vec f = random_field(55, n, 0.15);
  const Mat r = random_symmetric(56, n, 0.12);

  double e0 = 0.0;
  const SqueezeGradient grad = grad_squeeze(grid, g, p, f, r, &e0);
  CHECK(e0 == doctest::Approx(energy_squeeze(grid, g, p, f, r)).epsilon(1e-13));

  const double hf = 1e-5 * (1.0 + f.norm());
  for (int a : {0, 7, 23}) {
    Vec fp = f, fm = f;
    fp(a) += hf;
    fm(a) -= hf;
    double fd = (energy_squeeze(grid, g, p, fp, r) - energy_squeeze(grid, g, p, fm, r)) /
                (2 * hf);
    CHECK(fd == doctest::Approx(2.0 * grad.f(a).real()).epsilon(1e-6).scale(1e-2));
    fp = f;
    fm = f;
    fp(a) += Complex(0, hf);
    fm(a) -= Complex(0, hf);
    fd = (energy_squeeze(grid, g, p, fp, r) - energy_squeeze(grid, g, p, fm, r)) /
         (2 * hf);
    CHECK(fd == doctest::Approx(2.0 * grad.f(a).imag()).epsilon(1e-6).scale(1e-2));
  }

  const double hr = 1e-5 * (1.0 + r.norm());
  const std::array<std::pair<int, int>, 4> probes{{{0, 0}, {0, 5}, {3, 7}, {11, 23}}};
  for (auto [a, b] : probes) {
    const double pair_factor = (a == b) ? 2.0 : 4.0;
    Mat rp = r, rm = r;
    rp(a, b) += hr;
    rp(b, a) = rp(a, b);
    rm(a, b) -= hr;
    rm(b, a) = rm(a, b);
    double fd = (energy_squeeze(grid, g, p, f, rp) - energy_squeeze(grid, g, p, f, rm)) /
                (2 * hr);
    CHECK(fd ==
          doctest::Approx(pair_factor * grad.r(a, b).real()).epsilon(1e-6).scale(1e-2));
    rp = r;
    rm = r;
    rp(a, b) += Complex(0, hr);
    rp(b, a) = rp(a, b);
    rm(a, b) -= Complex(0, hr);
    rm(b, a) = rm(a, b);
    fd = (energy_squeeze(grid, g, p, f, rp) - energy_squeeze(grid, g, p, f, rm)) /
         (2 * hr);
    CHECK(fd ==
          doctest::Approx(pair_factor * grad.r(a, b).imag()).epsilon(1e-6).scale(1e-2));
  }

  CHECK(symmetry_defect(grad.r) <= 1e-13);
}

TEST_CASE("hessian form matches a second difference and is coercive") {
  const MomentumGrid grid = build_grid(0.5, 2.0, 2, 6);
  const int n = grid.size();
  const double g = 0.01;
  const Vec3 p(0.0, 0.0, 0.2);

  CHECK(hessian_form_at_origin(grid, g, p, Vec::Zero(n), Mat::Zero(n, n)) == 0.0);

  const double e_vac =
      energy_squeeze(grid, g, p, Vec::Zero(n), Mat::Zero(n, n));
  for (std::uint64_t seed : {61u, 62u, 63u}) {
    const Vec f = random_field(seed, n, 1.0);
    const Mat r = random_symmetric(seed + 10, n, 1.0);
    const double form = hessian_form_at_origin(grid, g, p, f, r);

    const double eps = 2.5e-4;
    const double second =
        (energy_squeeze(grid, g, p, (eps * f).eval(), (eps * r).eval()) +
         energy_squeeze(grid, g, p, (-eps * f).eval(), (-eps * r).eval()) -
         2.0 * e_vac) /
        (2.0 * eps * eps);
    CHECK(second == doctest::Approx(form).epsilon(1e-5));

    const double sigma = 0.5;
    CHECK(form >= (sigma / 4.0) * (f.squaredNorm() + r.squaredNorm()) - 1e-10);
  }
}
