#include "pfbhf/lagrange.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "pfbhf/energy.hpp"
#include "pfbhf/quasifree.hpp"

namespace pfbhf {

namespace {

void require_square_match(const Mat& A, const Mat& B, const char* who) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols()) {
    std::ostringstream os;
    os << who << ": operands must be square and of equal size";
    throw std::invalid_argument(os.str());
  }
}

//! k_a . k_b Gram matrix of the momentum nodes.
RMat momentum_gram(const MomentumGrid& grid) { return grid.k * grid.k.transpose(); }

//! phi_j = G_j + K_j f, the shifted coupling entering every source term.
std::array<Vec, 3> shifted_coupling(const MomentumGrid& grid,
                                    const CouplingField& G, const Vec& f) {
  std::array<Vec, 3> phi;
  for (int j = 0; j < 3; ++j)
    phi[j] =
        G.comp[j].cast<Complex>() + f.cwiseProduct(grid.k.col(j).cast<Complex>());
  return phi;
}

Mat symmetric_source(const std::array<Vec, 3>& phi) {
  Mat s = Mat::Zero(phi[0].size(), phi[0].size());
  for (const Vec& c : phi) s += c * c.transpose();
  return s;
}

Mat hermitian_source(const std::array<Vec, 3>& phi) {
  Mat s = Mat::Zero(phi[0].size(), phi[0].size());
  for (const Vec& c : phi) s += c * c.adjoint();
  return s;
}

Mat pair_operator_apply(const RMat& KK, const Mat& lambda, const Mat& x) {
  return KK.cwiseProduct(x.real()).cast<Complex>() +
         Complex(0, 1) * KK.cwiseProduct(x.imag()).cast<Complex>() + lambda * x +
         x * lambda.transpose();
}

double frob_inner(const Mat& a, const Mat& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

//! Right side of the f equation: M(gamma, u) f = rhs with the pair-field
//! term evaluated at the supplied phi (previous sweep's field).
Vec f_equation_rhs(const MomentumGrid& grid, const CouplingField& G,
                   const Mat& gamma, const Mat& t, const Vec3& u,
                   const std::array<Vec, 3>& phi) {
  Vec rhs = G.dot(u).cast<Complex>();
  for (int j = 0; j < 3; ++j) {
    const RVec kj = grid.k.col(j);
    rhs -= 0.5 * (kj.cwiseProduct(G.comp[j])).cast<Complex>();
    rhs -= kj.cast<Complex>().cwiseProduct(gamma * G.comp[j].cast<Complex>());
    rhs -= kj.cast<Complex>().cwiseProduct(t * phi[j].conjugate());
  }
  return rhs;
}

}  // namespace

double ResidualSet::max() const {
  return std::max({res_f, res_alpha, res_gamma, res_lambda, res_u});
}

Mat sylvester_solve(const Mat& A, const Mat& B) {
  require_square_match(A, B, "sylvester_solve");
  if (hermiticity_defect(A) > kSymmetryTol * (1.0 + A.norm()))
    throw std::invalid_argument("sylvester_solve: A must be Hermitian");

  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const RVec a = es.eigenvalues();
  if (a.minCoeff() <= 0.0)
    throw std::domain_error("sylvester_solve: A must be positive definite");

  const Mat& U = es.eigenvectors();
  Mat Bt = U.adjoint() * B * U;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) Bt(i, j) /= a(i) + a(j);
  return U * Bt * U.adjoint();
}

Mat pair_solve(const MomentumGrid& grid, const Mat& lambda, const Mat& rhs,
               double tol, const Mat* warm) {
  const int n = grid.size();
  if (lambda.rows() != n || lambda.cols() != n || rhs.rows() != n || rhs.cols() != n)
    throw std::invalid_argument("pair_solve: operands must match the grid size");
  if (!(tol > 0.0)) throw std::invalid_argument("pair_solve: tol must be > 0");
  if (hermiticity_defect(lambda) > kSymmetryTol * (1.0 + lambda.norm()))
    throw std::invalid_argument("pair_solve: lambda must be Hermitian");

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Mat::Zero(n, n);

  const RMat KK = momentum_gram(grid);

  // Jacobi preconditioner from the operator diagonal; dropped if indefinite
  RMat precond(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      precond(a, b) = KK(a, b) + lambda(a, a).real() + lambda(b, b).real();
  if (precond.minCoeff() <= 0.0) precond.setOnes();

  Mat x = warm ? *warm : Mat::Zero(n, n);
  Mat r = rhs - pair_operator_apply(KK, lambda, x);
  Mat z = r.cwiseQuotient(precond.cast<Complex>());
  Mat d = z;
  double rz = frob_inner(r, z);

  const int max_iter = 40 * n * n + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (r.norm() <= tol * rhs_norm) return x;
    const Mat Ad = pair_operator_apply(KK, lambda, d);
    const double curvature = frob_inner(d, Ad);
    if (curvature <= 0.0)
      throw std::domain_error(
          "pair_solve: operator is not positive definite (curvature <= 0)");
    const double alpha = rz / curvature;
    x += alpha * d;
    r -= alpha * Ad;
    z = r.cwiseQuotient(precond.cast<Complex>());
    const double rz_next = frob_inner(r, z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  throw std::runtime_error("pair_solve: conjugate gradients stalled");
}

RMat mass_operator_diag(const MomentumGrid& grid, const Vec3& u) {
  return grid.disp - grid.k * u;
}

namespace {

Mat mass_operator(const MomentumGrid& grid, const Mat& gamma, const Vec3& u) {
  const RMat KK = momentum_gram(grid);
  Mat M = KK.cwiseProduct(gamma.real()).cast<Complex>() +
          Complex(0, 1) * KK.cwiseProduct(gamma.imag()).cast<Complex>();
  M += mass_operator_diag(grid, u).cast<Complex>().asDiagonal();
  return M;
}

}  // namespace

Mat reconstruct_lambda(const MomentumGrid& grid, double g, const Vec3& p,
                       const Vec& f, const Mat& gamma, const Vec3& u) {
  (void)p;
  const CouplingField G = coupling_field(grid, g);
  const auto phi = shifted_coupling(grid, G, f);
  Mat half_plus = gamma;
  half_plus.diagonal().array() += 0.5;
  return sylvester_solve(half_plus, mass_operator(grid, gamma, u) +
                                        hermitian_source(phi));
}

ResidualSet lagrange_residuals(const MomentumGrid& grid, double g, const Vec3& p,
                               const LagrangeState& state) {
  const int n = grid.size();
  if (state.f.size() != n || state.t.rows() != n || state.gamma.rows() != n ||
      state.lambda.rows() != n)
    throw std::invalid_argument("lagrange_residuals: state does not match grid");

  const CouplingField G = coupling_field(grid, g);
  const auto phi = shifted_coupling(grid, G, state.f);
  const RMat KK = momentum_gram(grid);
  const Mat M = mass_operator(grid, state.gamma, state.u);

  ResidualSet res;
  res.res_f =
      (M * state.f - f_equation_rhs(grid, G, state.gamma, state.t, state.u, phi))
          .norm();
  res.res_alpha = (pair_operator_apply(KK, state.lambda, state.t) +
                   symmetric_source(phi))
                      .norm();
  res.res_gamma = (state.gamma + state.gamma * state.gamma -
                   state.t * state.t.conjugate())
                      .norm();
  Mat half_plus = state.gamma;
  half_plus.diagonal().array() += 0.5;
  res.res_lambda = (half_plus * state.lambda + state.lambda * half_plus - M -
                    hermitian_source(phi))
                       .norm();
  res.res_u =
      (state.u - dressed_momentum(grid, g, p, state.f, state.gamma)).norm();
  return res;
}

LagrangeReport lagrange_iterate(const MomentumGrid& grid, double g, const Vec3& p,
                                double tol, int max_iter) {
  if (grid.sigma <= 0.0)
    throw std::invalid_argument(
        "lagrange_iterate: requires an infrared-regularized grid (sigma > 0)");
  if (!(tol > 0.0)) throw std::invalid_argument("lagrange_iterate: tol must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("lagrange_iterate: max_iter must be >= 1");

  const int n = grid.size();
  const CouplingField G = coupling_field(grid, g);

  LagrangeReport rep;
  LagrangeState& st = rep.state;
  st.f = Vec::Zero(n);
  st.t = Mat::Zero(n, n);
  st.gamma = Mat::Zero(n, n);
  st.lambda = (grid.disp - grid.k * p).cast<Complex>().asDiagonal();
  st.u = p;

  double prev_step = -1.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const auto phi = shifted_coupling(grid, G, st.f);

    // pair field from the previous multiplier and field
    const Mat source = symmetric_source(phi);
    const double pair_tol = std::clamp(
        0.1 * tol / std::max(source.norm(), 1e-300), 1e-14, 1e-6);
    st.t = pair_solve(grid, st.lambda, (-source).eval(), pair_tol, &st.t);

    st.gamma = gamma_from_pair(st.t);
    st.u = dressed_momentum(grid, g, p, st.f, st.gamma);
    if (st.u.norm() >= 0.5)
      throw std::domain_error("lagrange_iterate: |u| left the half ball");

    const Mat M = mass_operator(grid, st.gamma, st.u);
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("lagrange_iterate: mass operator lost positivity");
    const Vec f_next =
        llt.solve(f_equation_rhs(grid, G, st.gamma, st.t, st.u, phi));

    const auto phi_next = shifted_coupling(grid, G, f_next);
    Mat half_plus = st.gamma;
    half_plus.diagonal().array() += 0.5;
    const Mat lambda_next = sylvester_solve(half_plus, M + hermitian_source(phi_next));

    const double step = std::sqrt((f_next - st.f).squaredNorm() +
                                  (lambda_next - st.lambda).squaredNorm());
    if (prev_step > 0.0) rep.contraction_trace.push_back(step / prev_step);
    prev_step = step;

    st.f = f_next;
    st.lambda = lambda_next;
    rep.iterations = iter;

    rep.residuals = lagrange_residuals(grid, g, p, st);
    if (rep.residuals.max() <= tol) {
      rep.converged = true;
      break;
    }
  }

  QuasifreeState qs;
  qs.f = st.f;
  qs.gamma = st.gamma;
  qs.t = st.t;
  qs.pure = true;
  rep.energy = energy(grid, g, p, qs).total;
  return rep;
}

}  // namespace pfbhf
