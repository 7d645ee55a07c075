#include "pfbhf/variational.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pfbhf/energy.hpp"

namespace pfbhf {

namespace {

void require_massive(const MomentumGrid& grid, const char* who) {
  if (grid.sigma <= 0.0) {
    std::ostringstream os;
    os << who << ": requires an infrared-regularized grid (sigma > 0)";
    throw std::invalid_argument(os.str());
  }
}

double xnorm2(const Vec& f, const Mat& r) {
  return f.squaredNorm() + r.squaredNorm();
}

struct Direction {
  Vec f;
  Mat r;
};

//! Gaussian direction with symmetric r, normalized to unit X-norm.
Direction random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Direction d;
  d.f = Vec(n);
  for (int i = 0; i < n; ++i) d.f(i) = Complex(nd(rng), nd(rng));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  d.r = 0.5 * (m + m.transpose()).eval();
  const double s = std::sqrt(xnorm2(d.f, d.r));
  d.f /= s;
  d.r /= s;
  return d;
}

//! Central second difference of the energy along d at base point (f, r).
double second_difference(const MomentumGrid& grid, double g, const Vec3& p,
                         const Vec& f, const Mat& r, const Direction& d,
                         double h, double e_base) {
  const double ep = energy_squeeze(grid, g, p, (f + h * d.f).eval(), (r + h * d.r).eval());
  const double em = energy_squeeze(grid, g, p, (f - h * d.f).eval(), (r - h * d.r).eval());
  return (ep + em - 2.0 * e_base) / (h * h);
}

//! Diagonal of the origin Hessian: the preconditioning metric.
struct DiagonalMetric {
  RVec f;   // D_a - k_a . p
  RMat r;   // |k_a + k_b|^2/4 + (|k_a| + |k_b|)/2 - (k_a + k_b) . p / 2
};

DiagonalMetric diagonal_metric(const MomentumGrid& grid, const Vec3& p) {
  const int n = grid.size();
  DiagonalMetric m;
  m.f = grid.disp - grid.k * p;
  m.r.resize(n, n);
  for (int a = 0; a < n; ++a) {
    const Vec3 ka = grid.k.row(a).transpose();
    for (int b = 0; b <= a; ++b) {
      const Vec3 kb = grid.k.row(b).transpose();
      const Vec3 ks = ka + kb;
      m.r(a, b) = 0.25 * ks.squaredNorm() +
                  0.5 * (grid.kmag(a) + grid.kmag(b)) - 0.5 * ks.dot(p);
      m.r(b, a) = m.r(a, b);
    }
  }
  return m;
}

}  // namespace

VariationalReport minimize_quasifree(const MomentumGrid& grid, double g,
                                     const Vec3& p, double tol, int max_iter,
                                     DescentStrategy strategy) {
  require_massive(grid, "minimize_quasifree");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_quasifree: tol must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("minimize_quasifree: max_iter must be >= 1");

  const int n = grid.size();
  const DiagonalMetric metric = diagonal_metric(grid, p);

  VariationalReport rep;
  rep.f = Vec::Zero(n);
  rep.r = Mat::Zero(n, n);

  constexpr double armijo_c = 1e-4;
  double e = 0.0;
  SqueezeGradient grad = grad_squeeze(grid, g, p, rep.f, rep.r, &e);
  rep.energy_trace.push_back(e);

  for (int iter = 0; iter < max_iter; ++iter) {
    rep.grad_norm = std::sqrt(xnorm2(grad.f, grad.r));
    if (rep.grad_norm <= tol) break;

    Direction d;
    if (strategy == DescentStrategy::gradient) {
      d.f = -grad.f;
      d.r = -grad.r;
    } else {
      d.f = -(grad.f.array() / metric.f.array().cast<Complex>()).matrix();
      d.r = -(grad.r.array() / metric.r.array().cast<Complex>()).matrix();
    }
    // dE/dt along d; negative because the metric is positive
    const double slope = 2.0 * (grad.f.dot(d.f).real() +
                                grad.r.cwiseProduct(d.r.conjugate()).sum().real());

    double step = 1.0;
    Vec f_next;
    Mat r_next;
    double e_next = 0.0;
    while (true) {
      f_next = rep.f + step * d.f;
      r_next = rep.r + step * d.r;
      e_next = energy_squeeze(grid, g, p, f_next, r_next);
      if (e_next <= e + armijo_c * step * slope) break;
      step *= 0.5;
      if (step < 1e-18) {
        std::ostringstream os;
        os << "minimize_quasifree: line search failed at iteration " << iter
           << " (energy " << e << ", grad " << rep.grad_norm << ", slope "
           << slope << ")";
        throw std::runtime_error(os.str());
      }
    }
    rep.f.swap(f_next);
    rep.r.swap(r_next);
    e = e_next;
    rep.energy_trace.push_back(e);
    rep.iterations = iter + 1;
    grad = grad_squeeze(grid, g, p, rep.f, rep.r, &e);
  }

  rep.grad_norm = std::sqrt(xnorm2(grad.f, grad.r));
  rep.energy = e;
  rep.state = state_from_squeeze(rep.f, rep.r);

  rep.r_estimate = estimate_convexity_radius(grid, g, p, 2, 12345);
  rep.inside_ball = std::sqrt(xnorm2(rep.f, rep.r)) <= rep.r_estimate;
  const CouplingField G = coupling_field(grid, g);
  rep.certified = G.norm2() <= 0.5 * grid.sigma;
  rep.coercive_hypothesis = 0.5 * p.squaredNorm() + 0.5 * G.norm2() <
                            grid.sigma * rep.r_estimate * rep.r_estimate;
  return rep;
}

double coercivity_check(const MomentumGrid& grid, double g, const Vec3& p,
                        int samples, std::uint64_t seed) {
  require_massive(grid, "coercivity_check");
  if (samples < 1)
    throw std::invalid_argument("coercivity_check: samples must be >= 1");

  std::mt19937_64 rng(seed);
  const int n = grid.size();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    // log-spaced scales 0.01 .. 10, endpoint included
    const double frac = (samples == 1) ? 1.0 : double(i) / (samples - 1);
    const double scale = std::pow(10.0, -2.0 + 3.0 * frac);
    const Direction d = random_direction(rng, n);
    const double e =
        energy_squeeze(grid, g, p, (scale * d.f).eval(), (scale * d.r).eval());
    const double ratio = e / (grid.sigma * scale * scale);
    worst = std::min(worst, ratio);
  }
  return worst;
}

double convexity_check(const MomentumGrid& grid, double g, const Vec3& p,
                       int samples, std::uint64_t seed) {
  require_massive(grid, "convexity_check");
  if (samples < 1)
    throw std::invalid_argument("convexity_check: samples must be >= 1");
  if (p.norm() > 0.5)
    throw std::invalid_argument("convexity_check: requires |p| <= 1/2");

  std::mt19937_64 rng(seed);
  const int n = grid.size();
  const Vec zero_f = Vec::Zero(n);
  const Mat zero_r = Mat::Zero(n, n);
  double worst = std::numeric_limits<double>::infinity();

  for (int i = 0; i < samples; ++i) {
    const Direction d = random_direction(rng, n);
    worst = std::min(worst, hessian_form_at_origin(grid, g, p, d.f, d.r));
  }

  std::uniform_real_distribution<double> ud(0.0, 1.0);
  constexpr double ball = 0.2, h = 1e-3;
  for (int i = 0; i < samples; ++i) {
    const Direction base = random_direction(rng, n);
    const double rho = ball * ud(rng);
    const Vec f0 = rho * base.f;
    const Mat r0 = rho * base.r;
    const double e0 = energy_squeeze(grid, g, p, f0, r0);
    const Direction d = random_direction(rng, n);
    worst = std::min(worst, second_difference(grid, g, p, f0, r0, d, h, e0));
  }
  return worst;
}

double estimate_convexity_radius(const MomentumGrid& grid, double g,
                                 const Vec3& p, int directions,
                                 std::uint64_t seed) {
  require_massive(grid, "estimate_convexity_radius");
  if (directions < 1)
    throw std::invalid_argument("estimate_convexity_radius: directions must be >= 1");

  std::mt19937_64 rng(seed);
  const int n = grid.size();
  const double floor_rayleigh = 0.25 * grid.sigma - 1e-6;
  constexpr double h = 1e-3;

  double passed = 0.0;
  for (double radius : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const Direction base = random_direction(rng, n);
    const Vec f0 = radius * base.f;
    const Mat r0 = radius * base.r;
    const double e0 = energy_squeeze(grid, g, p, f0, r0);
    bool ok = true;
    for (int j = 0; j < directions && ok; ++j) {
      const Direction d = random_direction(rng, n);
      ok = second_difference(grid, g, p, f0, r0, d, h, e0) >= floor_rayleigh;
    }
    if (!ok) break;
    passed = radius;
  }
  return passed;
}

}  // namespace pfbhf
