#include "pfbhf/quasifree.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace pfbhf {

namespace {

void require_symmetric(const Mat& r, const char* who) {
  if (r.rows() != r.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (symmetry_defect(r) > kSymmetryTol)
    throw std::invalid_argument(std::string(who) + ": matrix must be complex symmetric");
}

// extract the complex matrix M = P + iQ from its real representation
// [[P, -Q], [Q, P]], averaging the redundant blocks
Mat linear_from_rep(const RMat& rep) {
  const int n = static_cast<int>(rep.rows()) / 2;
  RMat P = 0.5 * (rep.topLeftCorner(n, n) + rep.bottomRightCorner(n, n));
  RMat Q = 0.5 * (rep.bottomLeftCorner(n, n) - rep.topRightCorner(n, n));
  return P.cast<Complex>() + Complex(0, 1) * Q.cast<Complex>();
}

// deterministic sign / phase convention: the entry of largest modulus is made
// positive-real.  For s > 0 only +-1 preserves the Takagi relation, and the
// construction already delivers that entry real up to roundoff.
void normalize_column(Eigen::Ref<Vec> col, bool full_phase) {
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < col.size(); ++i) {
    double m = std::abs(col(i));
    if (m > best + 1e-12) {
      best = m;
      imax = i;
    }
  }
  const Complex v = col(imax);
  if (std::abs(v) == 0.0) return;
  if (full_phase) {
    col *= std::conj(v) / std::abs(v);
  } else {
    if (std::abs(v.real()) >= 1e-14) {
      if (v.real() < 0) col = -col;
    } else if (v.imag() < 0) {
      col = -col;
    }
  }
}

}  // namespace

RMat squeeze_real_rep(const Mat& r) {
  const int n = static_cast<int>(r.rows());
  RMat A = r.real();
  RMat B = r.imag();
  RMat R(2 * n, 2 * n);
  R.topLeftCorner(n, n) = A;
  R.topRightCorner(n, n) = B;
  R.bottomLeftCorner(n, n) = B;
  R.bottomRightCorner(n, n) = -A;
  return R;
}

TakagiFactorization takagi(const Mat& r) {
  require_symmetric(r, "takagi");
  const int n = static_cast<int>(r.rows());
  TakagiFactorization out;
  if (r.norm() == 0.0) {
    out.U = Mat::Identity(n, n);
    out.s = RVec::Zero(n);
    return out;
  }

  Eigen::SelfAdjointEigenSolver<RMat> es(squeeze_real_rep(r));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("takagi: eigensolver failed");
  const RMat& V = es.eigenvectors();
  const RVec& d = es.eigenvalues();  // ascending, spectrum symmetric about 0

  const double smax = std::max(1.0, std::abs(d(2 * n - 1)));
  const double ztol = 1e-13 * smax;

  out.U.resize(n, n);
  out.s.resize(n);
  int col = 0;
  // strictly positive eigenvalues, taken descending
  for (int i = 2 * n - 1; i >= 0 && col < n; --i) {
    if (d(i) <= ztol) break;
    out.s(col) = d(i);
    out.U.col(col) = V.col(i).head(n).cast<Complex>() +
                     Complex(0, 1) * V.col(i).tail(n).cast<Complex>();
    ++col;
  }
  // zero cluster: the +s/-s pairing degenerates, so eigenvectors may map to
  // complex-dependent vectors (u and iu).  Complete by Gram-Schmidt over all
  // near-null eigenvectors.
  if (col < n) {
    for (int i = 2 * n - 1; i >= 0 && col < n; --i) {
      if (std::abs(d(i)) > ztol) continue;
      Vec u = V.col(i).head(n).cast<Complex>() +
              Complex(0, 1) * V.col(i).tail(n).cast<Complex>();
      for (int j = 0; j < col; ++j) u -= out.U.col(j).dot(u) * out.U.col(j);
      const double nrm = u.norm();
      if (nrm < 0.5) continue;  // was (a phase of) an already accepted column
      out.s(col) = 0.0;
      out.U.col(col) = u / nrm;
      ++col;
    }
  }
  if (col != n) throw std::runtime_error("takagi: factor completion failed");

  for (int j = 0; j < n; ++j)
    normalize_column(out.U.col(j), /*full_phase=*/out.s(j) <= ztol);
  return out;
}

void squeeze_gamma_t(const RMat& V, const RVec& d, Mat& gamma, Mat& t) {
  const int n2 = static_cast<int>(d.size());
  const int n = n2 / 2;
  RVec hc(n2), hs(n2);
  for (int i = 0; i < n2; ++i) {
    const double sh = std::sinh(d(i));
    hc(i) = sh * sh;                       // (cosh(2d) - 1)/2
    hs(i) = sh * std::cosh(d(i));          // sinh(2d)/2
  }
  RMat gamma_rep = (V * hc.asDiagonal()) * V.transpose();
  gamma = linear_from_rep(gamma_rep);
  gamma = 0.5 * (gamma + gamma.adjoint()).eval();

  RMat srep = (V * hs.asDiagonal()) * V.transpose();
  // multiply by the conjugation rep C = diag(I, -I) to obtain the linear map
  srep.rightCols(n) *= -1.0;
  t = linear_from_rep(srep);
  t = 0.5 * (t + t.transpose()).eval();
}

QuasifreeState state_from_squeeze(const Vec& f, const Mat& r) {
  require_symmetric(r, "state_from_squeeze");
  if (f.size() != r.rows())
    throw std::invalid_argument("state_from_squeeze: size mismatch between f and r");
  QuasifreeState st;
  st.f = f;
  st.pure = true;
  const int n = static_cast<int>(r.rows());
  if (r.norm() == 0.0) {
    st.gamma = Mat::Zero(n, n);
    st.t = Mat::Zero(n, n);
    return st;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(squeeze_real_rep(r));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("state_from_squeeze: eigensolver failed");
  squeeze_gamma_t(es.eigenvectors(), es.eigenvalues(), st.gamma, st.t);
  return st;
}

double pureness_residual(const Mat& gamma, const Mat& t) {
  return (gamma + gamma * gamma - t * t.adjoint()).norm();
}

Mat gamma_from_pair(const Mat& t) {
  require_symmetric(t, "gamma_from_pair");
  Mat H = t * t.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gamma_from_pair: eigensolver failed");
  const int n = static_cast<int>(t.rows());
  RVec g(n);
  for (int i = 0; i < n; ++i) {
    const double mu = std::max(es.eigenvalues()(i), 0.0);
    g(i) = 2.0 * mu / (std::sqrt(1.0 + 4.0 * mu) + 1.0);  // (sqrt(1+4mu)-1)/2
  }
  Mat out = es.eigenvectors() * g.asDiagonal().toDenseMatrix().cast<Complex>() *
            es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

QuasifreeState sample_pure(std::uint64_t seed, double scale, const MomentumGrid& grid) {
  const int n = grid.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale / std::sqrt(2.0));
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(nd(rng), nd(rng));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  Mat r = 0.5 * (m + m.transpose());
  return state_from_squeeze(f, r);
}

QuasifreeState sample_mixed(std::uint64_t seed, double scale, const MomentumGrid& grid,
                            double mix_scale) {
  if (mix_scale < 0.0)
    throw std::invalid_argument("sample_mixed: mix_scale must be >= 0");
  QuasifreeState st = sample_pure(seed, scale, grid);
  if (mix_scale > 0.0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> nd(0.0, mix_scale);
    for (int i = 0; i < st.gamma.rows(); ++i)
      st.gamma(i, i) += std::abs(nd(rng));
  }
  st.pure = (mix_scale == 0.0);
  return st;
}

double gibbs_trace(const RVec& c) {
  double prod = 1.0;
  for (int i = 0; i < c.size(); ++i) {
    if (!(c(i) >= 0.0) || c(i) >= 1.0)
      throw std::domain_error("gibbs_trace: factors must lie in [0, 1)");
    prod /= (1.0 - c(i));
  }
  return prod;
}

Mat pair_block_matrix(const Mat& gamma, const Mat& t) {
  const int n = static_cast<int>(gamma.rows());
  Mat blk(2 * n, 2 * n);
  blk.topLeftCorner(n, n) = gamma;
  blk.topRightCorner(n, n) = t;
  blk.bottomLeftCorner(n, n) = t.adjoint();
  blk.bottomRightCorner(n, n) = Mat::Identity(n, n) + gamma.conjugate();
  return blk;
}

}  // namespace pfbhf
