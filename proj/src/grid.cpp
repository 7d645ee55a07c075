#include "pfbhf/grid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace pfbhf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double symmetry_defect(const Mat& m) {
  if (m.rows() != m.cols()) return 1.0;
  double scale = 1.0 + m.norm();
  return (m - m.transpose()).norm() / scale;
}

double hermiticity_defect(const Mat& m) {
  if (m.rows() != m.cols()) return 1.0;
  double scale = 1.0 + m.norm();
  return (m - m.adjoint()).norm() / scale;
}

void gauss_legendre(int n, double a, double b, RVec& x, RVec& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: need b > a");
  x.resize(n);
  w.resize(n);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x(i) = xm - xl * z;
    x(n - 1 - i) = xm + xl * z;
    w(i) = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w(n - 1 - i) = w(i);
  }
}

namespace {

void push_point(std::vector<Vec3>& pts, std::vector<double>& ws, const Vec3& p, double w) {
  pts.push_back(p.normalized());
  ws.push_back(w);
}

// all sign flips and axis permutations of the orbit generators
void orbit_axes(std::vector<Vec3>& pts, std::vector<double>& ws, double w) {
  for (int ax = 0; ax < 3; ++ax)
    for (int s = -1; s <= 1; s += 2) {
      Vec3 p = Vec3::Zero();
      p(ax) = s;
      push_point(pts, ws, p, w);
    }
}

void orbit_edges(std::vector<Vec3>& pts, std::vector<double>& ws, double w) {
  const double c = 1.0 / std::sqrt(2.0);
  for (int ax = 0; ax < 3; ++ax)
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2) {
        Vec3 p;
        if (ax == 0) p = Vec3(0, s1 * c, s2 * c);
        if (ax == 1) p = Vec3(s1 * c, 0, s2 * c);
        if (ax == 2) p = Vec3(s1 * c, s2 * c, 0);
        push_point(pts, ws, p, w);
      }
}

void orbit_corners(std::vector<Vec3>& pts, std::vector<double>& ws, double w) {
  const double c = 1.0 / std::sqrt(3.0);
  for (int s1 = -1; s1 <= 1; s1 += 2)
    for (int s2 = -1; s2 <= 1; s2 += 2)
      for (int s3 = -1; s3 <= 1; s3 += 2)
        push_point(pts, ws, Vec3(s1 * c, s2 * c, s3 * c), w);
}

// 24 points (p, q, 0) with all sign choices and coordinate placements
void orbit_pq0(std::vector<Vec3>& pts, std::vector<double>& ws, double p, double q, double w) {
  for (int pos = 0; pos < 6; ++pos)
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2) {
        double a = s1 * p, b = s2 * q;
        Vec3 v;
        switch (pos) {
          case 0: v = Vec3(a, b, 0); break;
          case 1: v = Vec3(b, a, 0); break;
          case 2: v = Vec3(a, 0, b); break;
          case 3: v = Vec3(b, 0, a); break;
          case 4: v = Vec3(0, a, b); break;
          default: v = Vec3(0, b, a); break;
        }
        push_point(pts, ws, v, w);
      }
}

// 24 points (l, l, m) with sign choices and placements of the odd coordinate
void orbit_llm(std::vector<Vec3>& pts, std::vector<double>& ws, double l, double m, double w) {
  for (int pos = 0; pos < 3; ++pos)
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2)
        for (int s3 = -1; s3 <= 1; s3 += 2) {
          double a = s1 * l, b = s2 * l, c = s3 * m;
          Vec3 v;
          if (pos == 0) v = Vec3(a, b, c);
          if (pos == 1) v = Vec3(a, c, b);
          if (pos == 2) v = Vec3(c, a, b);
          push_point(pts, ws, v, w);
        }
}

}  // namespace

void spherical_rule(int n, RMat& pts_out, RVec& w_out) {
  std::vector<Vec3> pts;
  std::vector<double> ws;
  switch (n) {
    case 6:
      orbit_axes(pts, ws, 1.0 / 6.0);
      break;
    case 14:
      orbit_axes(pts, ws, 1.0 / 15.0);
      orbit_corners(pts, ws, 3.0 / 40.0);
      break;
    case 26:
      orbit_axes(pts, ws, 1.0 / 21.0);
      orbit_edges(pts, ws, 4.0 / 105.0);
      orbit_corners(pts, ws, 9.0 / 280.0);
      break;
    case 38: {
      orbit_axes(pts, ws, 1.0 / 105.0);
      orbit_corners(pts, ws, 9.0 / 280.0);
      const double r3 = 1.0 / std::sqrt(3.0);
      const double p = std::sqrt(0.5 * (1.0 + r3));
      const double q = std::sqrt(0.5 * (1.0 - r3));
      orbit_pq0(pts, ws, p, q, 1.0 / 35.0);
      break;
    }
    case 50: {
      orbit_axes(pts, ws, 4.0 / 315.0);
      orbit_edges(pts, ws, 64.0 / 2835.0);
      orbit_corners(pts, ws, 27.0 / 1280.0);
      const double l = 1.0 / std::sqrt(11.0);
      const double m = 3.0 / std::sqrt(11.0);
      orbit_llm(pts, ws, l, m, 14641.0 / 725760.0);
      break;
    }
    default:
      throw std::invalid_argument(
          "spherical_rule: supported point counts are 6, 14, 26, 38, 50");
  }
  const int np = static_cast<int>(pts.size());
  pts_out.resize(np, 3);
  w_out.resize(np);
  for (int i = 0; i < np; ++i) {
    pts_out.row(i) = pts[i].transpose();
    w_out(i) = 4.0 * kPi * ws[i];
  }
}

std::pair<Vec3, Vec3> polarization_frame(const Vec3& khat) {
  if (std::abs(khat.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("polarization_frame: khat must be a unit vector");
  const Vec3 zhat(0, 0, 1);
  Vec3 cross = zhat.cross(khat);
  Vec3 eplus;
  if (cross.norm() < 1e-8) {
    eplus = Vec3(1, 0, 0);  // polar fallback axis
  } else {
    eplus = cross.normalized();
  }
  Vec3 eminus = khat.cross(eplus);
  return {eplus, eminus};
}

MomentumGrid build_grid(double sigma, double cutoff, int n_radial, int n_angular) {
  if (sigma < 0.0) throw std::invalid_argument("build_grid: sigma must be >= 0");
  if (!(cutoff > sigma)) throw std::invalid_argument("build_grid: cutoff must exceed sigma");
  if (n_radial < 2) throw std::invalid_argument("build_grid: n_radial must be >= 2");

  RVec rx, rw;
  gauss_legendre(n_radial, sigma, cutoff, rx, rw);
  RMat ang_pts;
  RVec ang_w;
  spherical_rule(n_angular, ang_pts, ang_w);  // throws on unsupported counts

  MomentumGrid grid;
  grid.sigma = sigma;
  grid.cutoff = cutoff;
  grid.n_radial = n_radial;
  grid.n_angular = n_angular;

  const int nn = n_radial * n_angular * 2;
  grid.k.resize(nn, 3);
  grid.kmag.resize(nn);
  grid.weight.resize(nn);
  grid.pol.resize(nn);
  grid.eps.resize(nn, 3);

  int a = 0;
  for (int ir = 0; ir < n_radial; ++ir) {
    const double r = rx(ir);
    const double wr = rw(ir) * r * r;  // absorb the r^2 Jacobian
    for (int ia = 0; ia < n_angular; ++ia) {
      const Vec3 khat = ang_pts.row(ia).transpose();
      auto [eplus, eminus] = polarization_frame(khat);
      const double w = wr * ang_w(ia);
      for (int tau = 0; tau < 2; ++tau) {
        grid.k.row(a) = (r * khat).transpose();
        grid.kmag(a) = r;
        grid.weight(a) = w;
        grid.pol(a) = tau == 0 ? 1 : -1;
        grid.eps.row(a) = (tau == 0 ? eplus : eminus).transpose();
        ++a;
      }
    }
  }
  grid.sqrt_w = grid.weight.cwiseSqrt();
  grid.disp = 0.5 * grid.kmag.cwiseProduct(grid.kmag) + grid.kmag;
  return grid;
}

double CouplingField::norm2() const {
  double s = 0.0;
  for (const auto& c : comp) s += c.squaredNorm();
  return s;
}

RVec CouplingField::dot(const Vec3& u) const {
  return u(0) * comp[0] + u(1) * comp[1] + u(2) * comp[2];
}

CouplingField coupling_field(const MomentumGrid& grid, double g) {
  CouplingField G;
  G.g = g;
  const int n = grid.size();
  for (int j = 0; j < 3; ++j) G.comp[j].resize(n);
  for (int a = 0; a < n; ++a) {
    const double c = grid.sqrt_w(a) * g / std::sqrt(grid.kmag(a));
    for (int j = 0; j < 3; ++j) G.comp[j](a) = c * grid.eps(a, j);
  }
  return G;
}

double analytic_g_norm2(double g, double sigma, double cutoff) {
  return 4.0 * kPi * g * g * (cutoff * cutoff - sigma * sigma);
}

MomentumGrid randomize_frames(const MomentumGrid& grid, std::uint64_t seed) {
  MomentumGrid out = grid;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  // nodes come in polarization pairs sharing one transverse plane
  for (int a = 0; a + 1 < grid.size(); a += 2) {
    const double th = angle(rng);
    const Vec3 ep = grid.eps.row(a).transpose();
    const Vec3 em = grid.eps.row(a + 1).transpose();
    out.eps.row(a) = (std::cos(th) * ep + std::sin(th) * em).transpose();
    out.eps.row(a + 1) = (-std::sin(th) * ep + std::cos(th) * em).transpose();
  }
  return out;
}

MomentumGrid select_nodes(const MomentumGrid& grid, int d) {
  if (d < 1 || d > grid.size())
    throw std::invalid_argument("select_nodes: d out of range");
  MomentumGrid out;
  out.sigma = grid.sigma;
  out.cutoff = grid.cutoff;
  out.n_radial = grid.n_radial;
  out.n_angular = grid.n_angular;
  out.k = grid.k.topRows(d);
  out.kmag = grid.kmag.head(d);
  out.pol = grid.pol.head(d);
  out.eps = grid.eps.topRows(d);
  const double scale = grid.weight.sum() / grid.weight.head(d).sum();
  out.weight = grid.weight.head(d) * scale;
  out.sqrt_w = out.weight.cwiseSqrt();
  out.disp = 0.5 * out.kmag.cwiseProduct(out.kmag) + out.kmag;
  return out;
}

}  // namespace pfbhf
