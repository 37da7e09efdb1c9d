#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's numerics; only plain Eigen types are shared.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

// erf by its Maclaurin series in long double; accurate to ~1e-16 for |x| <= 3.
inline double erf_series(double xd) {
  const long double x = xd;
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 400; ++n) {
    term *= -x * x / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(2.0L / std::sqrt(kPi) * sum);
}

inline double phi_cdf(double x) { return 0.5 * (1.0 + erf_series(x / std::sqrt(2.0))); }
inline double phi_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * static_cast<double>(kPi)); }

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) + rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

// Root of a sign-changing function by plain bisection.
inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// 1-d stationarity root: |p| (1 - Φ(a)) = a φ(a).
inline double stationary_root_1d(double p) {
  const double q = std::abs(p);
  return bisect([q](double a) { return q * (1.0 - phi_cdf(a)) - a * phi_pdf(a); }, 1e-6, 6.0);
}

// A planar pseudo-cone given by raw data: cone edges g0, g1 (the two extreme
// rays) and constraints <x, u_i> <= -h_i.
struct Planar {
  Eigen::Vector2d g0;
  Eigen::Vector2d g1;
  std::vector<Eigen::Vector2d> u;
  std::vector<double> h;

  double edge_angle(const Eigen::Vector2d& g, const Eigen::Vector2d& axis) const {
    const Eigen::Vector2d ortho(-axis.y(), axis.x());
    return std::atan2(g.dot(ortho), g.dot(axis));
  }

  Eigen::Vector2d axis() const { return (g0.normalized() + g1.normalized()).normalized(); }

  Eigen::Vector2d ray(double theta) const {
    const Eigen::Vector2d a = axis();
    const Eigen::Vector2d o(-a.y(), a.x());
    return std::cos(theta) * a + std::sin(theta) * o;
  }

  double rho(const Eigen::Vector2d& v) const {
    double r = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) r = std::max(r, h[i] / -v.dot(u[i]));
    return r;
  }

  // γ²(K) = (1/2π) ∫_{Ω_C} e^{-ρ(θ)²/2} dθ.
  double gaussian_volume(double tol = 1e-15) const {
    const Eigen::Vector2d a = axis();
    double lo = edge_angle(g0, a);
    double hi = edge_angle(g1, a);
    if (lo > hi) std::swap(lo, hi);
    auto f = [&](double t) {
      const double r = rho(ray(t));
      return std::exp(-0.5 * r * r) / (2.0 * static_cast<double>(kPi));
    };
    // ρ has kinks where the active constraint switches; fixed pieces plus
    // adaptive refinement resolve them without knowing where they are.
    const int pieces = 64;
    double sum = 0.0;
    for (int k = 0; k < pieces; ++k) {
      sum += simpson(f, lo + (hi - lo) * k / pieces, lo + (hi - lo) * (k + 1) / pieces, tol / pieces);
    }
    return sum;
  }

  // ∫ over facet i of w(x) ds, by arclength along the constraint line.
  double facet_integral(std::size_t i, const std::function<double(const Eigen::Vector2d&)>& w,
                        double tol = 1e-15) const {
    const Eigen::Vector2d base = -h[i] * u[i];
    const Eigen::Vector2d dir(-u[i].y(), u[i].x());
    double lo = -1e3;
    double hi = 1e3;
    // Cone: x = a g0 + b g1 with a, b >= 0.
    Eigen::Matrix2d g;
    g << g0, g1;
    const Eigen::Matrix2d ginv = g.inverse();
    auto clip = [&](double c0, double c1) {  // c0 + s c1 >= 0
      if (std::abs(c1) < 1e-300) {
        if (c0 < 0.0) hi = lo - 1.0;
        return;
      }
      const double s = -c0 / c1;
      if (c1 > 0.0) lo = std::max(lo, s);
      else hi = std::min(hi, s);
    };
    const Eigen::Vector2d cb = ginv * base;
    const Eigen::Vector2d cd = ginv * dir;
    clip(cb[0], cd[0]);
    clip(cb[1], cd[1]);
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (j == i) continue;
      // -h_j - <x, u_j> >= 0
      clip(-h[j] - base.dot(u[j]), -dir.dot(u[j]));
    }
    if (!(hi > lo)) return 0.0;
    return simpson([&](double s) { return w(base + s * dir); }, lo, hi, tol);
  }
};

}  // namespace oracle
