#include "pfbhf/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace pfbhf {

namespace {

// Mixed-radix key of an occupation tuple, for index lookup.
long occ_key(const Eigen::MatrixXi& occ, int row, int base) {
  long key = 0;
  for (int i = 0; i < occ.cols(); ++i) key = key * base + occ(row, i);
  return key;
}

// Appends every composition of `total` into `d` parts, first part descending.
void append_shell(std::vector<std::vector<int>>& out, std::vector<int>& head,
                  int total, int d) {
  if (d == 1) {
    head.push_back(total);
    out.push_back(head);
    head.pop_back();
    return;
  }
  for (int n = total; n >= 0; --n) {
    head.push_back(n);
    append_shell(out, head, total - n, d - 1);
    head.pop_back();
  }
}

}  // namespace

FockContext build_fock(int d, int nmax) {
  if (d < 1 || d > 4)
    throw std::invalid_argument("build_fock: need 1 <= modes <= 4");
  if (nmax < 1 || nmax > 10)
    throw std::invalid_argument("build_fock: need 1 <= nmax <= 10");

  std::vector<std::vector<int>> states;
  std::vector<int> head;
  for (int total = 0; total <= nmax; ++total) append_shell(states, head, total, d);

  FockContext ctx;
  ctx.modes = d;
  ctx.nmax = nmax;
  ctx.dim = static_cast<int>(states.size());
  ctx.occ.resize(ctx.dim, d);
  for (int s = 0; s < ctx.dim; ++s)
    for (int i = 0; i < d; ++i) ctx.occ(s, i) = states[static_cast<size_t>(s)][static_cast<size_t>(i)];

  const int base = nmax + 1;
  std::unordered_map<long, int> index;
  index.reserve(static_cast<size_t>(ctx.dim));
  for (int s = 0; s < ctx.dim; ++s) index[occ_key(ctx.occ, s, base)] = s;

  ctx.ladder.assign(static_cast<size_t>(d), RMat::Zero(ctx.dim, ctx.dim));
  for (int s = 0; s < ctx.dim; ++s) {
    for (int i = 0; i < d; ++i) {
      const int n = ctx.occ(s, i);
      if (n == 0) continue;
      long key = occ_key(ctx.occ, s, base);
      // key of s - e_i: subtract the digit at position i
      long stride = 1;
      for (int j = d - 1; j > i; --j) stride *= base;
      const int target = index.at(key - stride);
      ctx.ladder[static_cast<size_t>(i)](target, s) = std::sqrt(static_cast<double>(n));
    }
  }
  return ctx;
}

Mat fock_hamiltonian(const FockContext& ctx, const MomentumGrid& grid,
                     double g, const Vec3& p) {
  if (grid.size() != ctx.modes)
    throw std::invalid_argument("fock_hamiltonian: grid node count must equal modes");

  const int dim = ctx.dim;
  const CouplingField G = coupling_field(grid, g);

  std::vector<RMat> number;
  number.reserve(static_cast<size_t>(ctx.modes));
  for (int a = 0; a < ctx.modes; ++a) {
    const RMat& an = ctx.ladder[static_cast<size_t>(a)];
    number.push_back(an.transpose() * an);
  }

  RMat h = RMat::Zero(dim, dim);
  for (int j = 0; j < 3; ++j) {
    RMat vj = RMat::Zero(dim, dim);
    for (int a = 0; a < ctx.modes; ++a) {
      const RMat& an = ctx.ladder[static_cast<size_t>(a)];
      vj += grid.k(a, j) * number[static_cast<size_t>(a)];
      vj += G.comp[j](a) * (an + an.transpose());
    }
    vj.diagonal().array() -= p(j);
    h += 0.5 * vj * vj;
  }
  for (int a = 0; a < ctx.modes; ++a)
    h += grid.kmag(a) * number[static_cast<size_t>(a)];

  return h.cast<Complex>();
}

Vec fock_quasifree_vector(const FockContext& ctx, const Vec& f, const Mat& r) {
  if (f.size() != ctx.modes || r.rows() != ctx.modes || r.cols() != ctx.modes)
    throw std::invalid_argument("fock_quasifree_vector: size mismatch");
  if ((r - r.transpose()).norm() > 1e-12 * (1.0 + r.norm()))
    throw std::invalid_argument("fock_quasifree_vector: r must be symmetric");

  const int dim = ctx.dim;

  Mat squeeze = Mat::Zero(dim, dim);
  for (int i = 0; i < ctx.modes; ++i) {
    for (int j = 0; j < ctx.modes; ++j) {
      if (r(i, j) == Complex(0, 0)) continue;
      const RMat aa =
          ctx.ladder[static_cast<size_t>(i)] * ctx.ladder[static_cast<size_t>(j)];
      squeeze += 0.5 * r(i, j) * aa.transpose().cast<Complex>();
      squeeze -= 0.5 * std::conj(r(i, j)) * aa.cast<Complex>();
    }
  }

  Mat displace = Mat::Zero(dim, dim);
  for (int a = 0; a < ctx.modes; ++a) {
    if (f(a) == Complex(0, 0)) continue;
    const RMat& an = ctx.ladder[static_cast<size_t>(a)];
    displace += f(a) * an.transpose().cast<Complex>();
    displace -= std::conj(f(a)) * an.cast<Complex>();
  }

  Vec psi = Vec::Zero(dim);
  psi(0) = 1.0;
  if (squeeze.norm() > 0) psi = squeeze.exp() * psi;
  if (displace.norm() > 0) psi = displace.exp() * psi;
  const double nrm = psi.norm();
  if (!(nrm > 0)) throw std::runtime_error("fock_quasifree_vector: norm underflow");
  return psi / nrm;
}

double fock_oracle_energy(const FockContext& ctx, const MomentumGrid& grid,
                          double g, const Vec3& p, const Vec& f, const Mat& r) {
  const Vec psi = fock_quasifree_vector(ctx, f, r);
  const Mat h = fock_hamiltonian(ctx, grid, g, p);
  return (psi.adjoint() * h * psi).value().real();
}

}  // namespace pfbhf
