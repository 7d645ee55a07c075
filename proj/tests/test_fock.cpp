#include <doctest.h>

#include <pfbhf/energy.hpp>
#include <pfbhf/fock.hpp>
#include <pfbhf/grid.hpp>
#include <pfbhf/quasifree.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

using namespace pfbhf;

namespace {

// Small momentum grid with exactly d nodes, weights renormalized.
MomentumGrid small_grid(int d) {
  return select_nodes(build_grid(0.5, 2.0, 2, 6), d);
}

long choose(int n, int k) {
  long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Vec random_field(int n, double scale, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(dist(gen), dist(gen));
  return f;
}

Mat random_symmetric(int n, double scale, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = Complex(dist(gen), dist(gen));
  return ((r + r.transpose()) / 2.0).eval();
}

// Weyl operator W(z) = exp((i/sqrt(2)) (z . adag + conj(z) . a)).
Mat weyl(const FockContext& ctx, const Vec& z) {
  Mat gen = Mat::Zero(ctx.dim, ctx.dim);
  for (int a = 0; a < ctx.modes; ++a) {
    const Mat an = ctx.ladder[static_cast<size_t>(a)].cast<Complex>();
    gen += (Complex(0, 1) / std::sqrt(2.0)) *
           (z(a) * an.adjoint() + std::conj(z(a)) * an);
  }
  return gen.exp();
}

}  // namespace

TEST_CASE("occupation basis and ladder matrices") {
  SUBCASE("single mode, two photons") {
    const FockContext ctx = build_fock(1, 2);
    CHECK(ctx.dim == 3);
    RMat expected(3, 3);
    expected << 0, 1, 0, 0, 0, std::sqrt(2.0), 0, 0, 0;
    CHECK((ctx.ladder[0] - expected).norm() == 0.0);
  }

  SUBCASE("two modes: shell-by-shell enumeration, first mode descending") {
    const FockContext ctx = build_fock(2, 2);
    CHECK(ctx.dim == 6);
    Eigen::MatrixXi expected(6, 2);
    expected << 0, 0, 1, 0, 0, 1, 2, 0, 1, 1, 0, 2;
    CHECK(ctx.occ == expected);
  }

  SUBCASE("dimension count") {
    for (int d = 1; d <= 4; ++d)
      for (int nmax : {1, 3, 6}) {
        const FockContext ctx = build_fock(d, nmax);
        CHECK(ctx.dim == choose(d + nmax, d));
      }
  }

  SUBCASE("canonical commutation relations below the top shell") {
    const FockContext ctx = build_fock(3, 4);
    std::vector<int> low;
    for (int s = 0; s < ctx.dim; ++s)
      if (ctx.occ.row(s).sum() < ctx.nmax) low.push_back(s);
    for (int i = 0; i < ctx.modes; ++i) {
      for (int j = 0; j < ctx.modes; ++j) {
        const RMat comm = ctx.ladder[static_cast<size_t>(i)] *
                              ctx.ladder[static_cast<size_t>(j)].transpose() -
                          ctx.ladder[static_cast<size_t>(j)].transpose() *
                              ctx.ladder[static_cast<size_t>(i)];
        double defect = 0.0;
        for (int s : low)
          for (int sp : low)
            defect = std::max(defect,
                              std::abs(comm(s, sp) - (i == j && s == sp ? 1.0 : 0.0)));
        CHECK(defect <= 1e-13);
      }
    }
  }

  SUBCASE("annihilation kills the vacuum") {
    const FockContext ctx = build_fock(2, 3);
    for (const RMat& a : ctx.ladder) CHECK(a.col(0).norm() == 0.0);
  }

  SUBCASE("budget guards") {
    CHECK_THROWS_AS((void)build_fock(0, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_fock(5, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_fock(2, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_fock(2, 11), std::invalid_argument);
  }
}

TEST_CASE("truncated Hamiltonian") {
  const FockContext ctx = build_fock(2, 6);
  const MomentumGrid grid = small_grid(2);

  SUBCASE("node count must match the mode count") {
    CHECK_THROWS_AS((void)fock_hamiltonian(ctx, small_grid(3), 0.1, Vec3::Zero()),
                    std::invalid_argument);
  }

  SUBCASE("Hermitian") {
    const Mat h = fock_hamiltonian(ctx, grid, 0.1, Vec3(0.1, -0.2, 0.3));
    CHECK((h - h.adjoint()).norm() <= 1e-12 * (1.0 + h.norm()));
  }

  SUBCASE("decoupled limit is diagonal in the occupation basis") {
    const Mat h = fock_hamiltonian(ctx, grid, 0.0, Vec3::Zero());
    Mat offdiag = h;
    offdiag.diagonal().setZero();
    CHECK(offdiag.norm() == 0.0);
    for (int s = 0; s < ctx.dim; ++s) {
      Vec3 ptot = Vec3::Zero();
      double field = 0.0;
      for (int a = 0; a < ctx.modes; ++a) {
        ptot += ctx.occ(s, a) * grid.k.row(a).transpose();
        field += ctx.occ(s, a) * grid.kmag(a);
      }
      CHECK(h(s, s).real() ==
            doctest::Approx(0.5 * ptot.squaredNorm() + field).epsilon(1e-13));
      if (ctx.occ.row(s).sum() == 1) {
        const double k = ptot.norm();
        CHECK(h(s, s).real() == doctest::Approx(0.5 * k * k + k).epsilon(1e-13));
      }
    }
  }

  SUBCASE("vacuum expectation") {
    const double g = 0.17;
    const Vec3 p(0.2, 0.1, -0.3);
    const Mat h = fock_hamiltonian(ctx, grid, g, p);
    const CouplingField G = coupling_field(grid, g);
    CHECK(h(0, 0).real() ==
          doctest::Approx(0.5 * p.squaredNorm() + 0.5 * G.norm2()).epsilon(1e-13));
  }

  SUBCASE("nonnegative up to truncation") {
    const Mat h = fock_hamiltonian(ctx, grid, 0.1, Vec3(0.0, 0.0, 0.2));
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("quasifree vectors on the truncated space") {
  SUBCASE("vacuum at the origin") {
    const FockContext ctx = build_fock(2, 4);
    const Vec psi = fock_quasifree_vector(ctx, Vec::Zero(2), Mat::Zero(2, 2));
    CHECK(std::abs(psi(0) - Complex(1, 0)) == 0.0);
    CHECK(psi.tail(ctx.dim - 1).norm() == 0.0);
  }

  SUBCASE("coherent amplitudes follow the exponential series") {
    const FockContext ctx = build_fock(1, 10);
    const Complex z(0.25, -0.15);
    Vec f(1);
    f(0) = z;
    const Vec psi = fock_quasifree_vector(ctx, f, Mat::Zero(1, 1));
    const double norm0 = std::exp(-0.5 * std::norm(z));
    double fact = 1.0;
    for (int n = 0; n <= 5; ++n) {
      if (n > 0) fact *= n;
      const Complex expected = norm0 * std::pow(z, n) / std::sqrt(fact);
      CHECK(std::abs(psi(n) - expected) <= 1e-10);
    }
  }

  SUBCASE("two-mode coherent amplitudes factorize") {
    const FockContext ctx = build_fock(2, 8);
    const Vec f = random_field(2, 0.2, 11);
    const Vec psi = fock_quasifree_vector(ctx, f, Mat::Zero(2, 2));
    const double norm0 = std::exp(-0.5 * f.squaredNorm());
    for (int s = 0; s < ctx.dim; ++s) {
      if (ctx.occ.row(s).sum() > 4) continue;
      Complex expected = norm0;
      for (int a = 0; a < 2; ++a) {
        const int n = ctx.occ(s, a);
        double fact = 1.0;
        for (int m = 2; m <= n; ++m) fact *= m;
        expected *= std::pow(f(a), n) / std::sqrt(fact);
      }
      CHECK(std::abs(psi(s) - expected) <= 1e-9);
    }
  }

  SUBCASE("one-mode squeeze: frozen sign convention") {
    const FockContext ctx = build_fock(1, 10);
    const double s = 0.3;
    Mat r(1, 1);
    r(0, 0) = s;
    const Vec psi = fock_quasifree_vector(ctx, Vec::Zero(1), r);
    const RMat& a = ctx.ladder[0];
    const Complex occ = (psi.adjoint() * (a.transpose() * a).cast<Complex>() * psi).value();
    const Complex pair = (psi.adjoint() * (a * a).cast<Complex>() * psi).value();
    CHECK(occ.real() == doctest::Approx(std::sinh(s) * std::sinh(s)).epsilon(1e-5));
    // The sign that distinguishes the two squeeze conventions: the pairing
    // moment must come out at +sinh cosh to match state_from_squeeze (the
    // wrong sign misses by 2 sinh cosh, far outside the tolerance).
    CHECK(pair.real() == doctest::Approx(std::sinh(s) * std::cosh(s)).epsilon(1e-5));
    CHECK(std::abs(pair.imag()) <= 1e-10);
  }

  SUBCASE("second moments reproduce the squeeze state") {
    const FockContext ctx = build_fock(2, 10);
    const Mat r = random_symmetric(2, 0.08, 21);
    const QuasifreeState st = state_from_squeeze(Vec::Zero(2), r);
    const Vec psi = fock_quasifree_vector(ctx, Vec::Zero(2), r);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Mat adb_aa = (ctx.ladder[static_cast<size_t>(b)].transpose() *
                            ctx.ladder[static_cast<size_t>(a)])
                               .cast<Complex>();
        const Mat aa_ab = (ctx.ladder[static_cast<size_t>(a)] *
                           ctx.ladder[static_cast<size_t>(b)])
                              .cast<Complex>();
        const Complex gamma_ab = (psi.adjoint() * adb_aa * psi).value();
        const Complex t_ab = (psi.adjoint() * aa_ab * psi).value();
        CHECK(std::abs(gamma_ab - st.gamma(a, b)) <= 1e-7);
        CHECK(std::abs(t_ab - st.t(a, b)) <= 1e-7);
      }
    }
  }

  SUBCASE("displacement shifts the first moment and centers the rest") {
    const FockContext ctx = build_fock(2, 10);
    const Vec f = random_field(2, 0.15, 31);
    const Mat r = random_symmetric(2, 0.08, 32);
    const QuasifreeState st = state_from_squeeze(f, r);
    const Vec psi = fock_quasifree_vector(ctx, f, r);
    for (int a = 0; a < 2; ++a) {
      const Complex mean =
          (psi.adjoint() * ctx.ladder[static_cast<size_t>(a)].cast<Complex>() * psi)
              .value();
      CHECK(std::abs(mean - f(a)) <= 1e-7);
      for (int b = 0; b < 2; ++b) {
        const Mat adb_aa = (ctx.ladder[static_cast<size_t>(b)].transpose() *
                            ctx.ladder[static_cast<size_t>(a)])
                               .cast<Complex>();
        const Mat aa_ab = (ctx.ladder[static_cast<size_t>(a)] *
                           ctx.ladder[static_cast<size_t>(b)])
                              .cast<Complex>();
        const Complex centered_gamma =
            (psi.adjoint() * adb_aa * psi).value() - std::conj(f(b)) * f(a);
        const Complex centered_t =
            (psi.adjoint() * aa_ab * psi).value() - f(a) * f(b);
        CHECK(std::abs(centered_gamma - st.gamma(a, b)) <= 1e-6);
        CHECK(std::abs(centered_t - st.t(a, b)) <= 1e-6);
      }
    }
  }

  SUBCASE("input validation") {
    const FockContext ctx = build_fock(2, 4);
    CHECK_THROWS_AS((void)fock_quasifree_vector(ctx, Vec::Zero(3), Mat::Zero(2, 2)),
                    std::invalid_argument);
    Mat bad = Mat::Zero(2, 2);
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS((void)fock_quasifree_vector(ctx, Vec::Zero(2), bad),
                    std::invalid_argument);
  }
}

TEST_CASE("Weyl relation holds to truncation accuracy") {
  const FockContext ctx = build_fock(2, 10);
  const Vec z1 = random_field(2, 0.2, 41);
  const Vec z2 = random_field(2, 0.2, 42);
  Vec omega = Vec::Zero(ctx.dim);
  omega(0) = 1.0;

  const Vec lhs = weyl(ctx, z1) * (weyl(ctx, z2) * omega);
  const Complex inner = z1.dot(z2);  // conjugate-linear in z1
  const Complex phase = std::exp(Complex(0, -0.5) * inner.imag());
  const Vec rhs = phase * (weyl(ctx, (z1 + z2).eval()) * omega);
  CHECK((lhs - rhs).norm() <= 1e-8);
}

TEST_CASE("oracle energy against the closed-form functional") {
  SUBCASE("vacuum point") {
    const FockContext ctx = build_fock(2, 6);
    const MomentumGrid grid = small_grid(2);
    const double g = 0.2;
    const Vec3 p(0.1, -0.1, 0.2);
    const CouplingField G = coupling_field(grid, g);
    CHECK(fock_oracle_energy(ctx, grid, g, p, Vec::Zero(2), Mat::Zero(2, 2)) ==
          doctest::Approx(0.5 * p.squaredNorm() + 0.5 * G.norm2()).epsilon(1e-13));
  }

  SUBCASE("random states, two modes") {
    const MomentumGrid grid = small_grid(2);
    const double g = 0.1;
    const Vec3 p(0.0, 0.1, 0.2);
    const Vec f = random_field(2, 0.15, 51);
    const Mat r = random_symmetric(2, 0.08, 52);
    const double closed = energy_squeeze(grid, g, p, f, r);
    const FockContext ctx = build_fock(2, 8);
    const double brute = fock_oracle_energy(ctx, grid, g, p, f, r);
    CHECK(brute == doctest::Approx(closed).epsilon(1e-6));
  }

  SUBCASE("truncation error decreases with the photon cutoff") {
    const MomentumGrid grid = small_grid(2);
    const double g = 0.1;
    const Vec3 p(0.0, 0.0, 0.2);
    const Vec f = random_field(2, 0.25, 61);
    const Mat r = random_symmetric(2, 0.2, 62);
    const double closed = energy_squeeze(grid, g, p, f, r);
    std::vector<double> errs;
    for (int nmax : {4, 6, 8}) {
      const FockContext ctx = build_fock(2, nmax);
      errs.push_back(std::abs(fock_oracle_energy(ctx, grid, g, p, f, r) - closed));
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
  }

  SUBCASE("three modes") {
    const MomentumGrid grid = small_grid(3);
    const double g = 0.1;
    const Vec3 p(0.1, 0.0, 0.1);
    const Vec f = random_field(3, 0.1, 71);
    const Mat r = random_symmetric(3, 0.05, 72);
    const double closed = energy_squeeze(grid, g, p, f, r);
    const FockContext ctx = build_fock(3, 8);
    CHECK(fock_oracle_energy(ctx, grid, g, p, f, r) ==
          doctest::Approx(closed).epsilon(1e-6));
  }
}
