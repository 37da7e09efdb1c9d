#include "gaussmink/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gaussmink {

namespace {

constexpr double kParallelTol = 1e-14;

// Iterates over all k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

bool Polyhedron::contains(const Vec& x, double tol) const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const Halfspace& h) { return h.normal.dot(x) <= h.offset + tol; });
}

Interval interval_of(const Polyhedron& region) {
  Interval out;
  for (const auto& c : region.constraints) {
    const double a = c.normal[0];
    if (std::abs(a) < kParallelTol) {
      if (c.offset < -kMembershipTol) return Interval{0.0, 0.0};
      continue;
    }
    const double bound = c.offset / a;
    if (a > 0.0) {
      out.hi = std::min(out.hi, bound);
    } else {
      out.lo = std::max(out.lo, bound);
    }
  }
  if (out.empty()) return Interval{out.lo, out.lo};
  return out;
}

std::vector<Eigen::Vector2d> clip_polygon(const Polyhedron& region, double box) {
  std::vector<Eigen::Vector2d> poly{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (const auto& c : region.constraints) {
    const Eigen::Vector2d a(c.normal[0], c.normal[1]);
    if (a.norm() < kParallelTol) {
      if (c.offset < -kMembershipTol) return {};
      continue;
    }
    std::vector<Eigen::Vector2d> next;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = poly[i];
      const auto& q = poly[(i + 1) % n];
      const double fp = a.dot(p) - c.offset;
      const double fq = a.dot(q) - c.offset;
      if (fp <= 0.0) next.push_back(p);
      if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
        const double s = fp / (fp - fq);
        next.push_back(p + s * (q - p));
      }
    }
    poly = std::move(next);
    if (poly.size() < 3) return {};
  }
  return poly;
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(twice);
}

std::vector<Vec> enumerate_vertices(const Polyhedron& region, double tol) {
  const int n = region.dim;
  const int m = static_cast<int>(region.constraints.size());
  std::vector<Vec> out;
  if (n == 0) return out;
  for_each_subset(m, n, [&](const std::vector<int>& idx) {
    Mat a(n, n);
    Vec b(n);
    for (int r = 0; r < n; ++r) {
      const auto& c = region.constraints[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
      a.row(r) = c.normal.transpose();
      b[r] = c.offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.rank() < n) return;
    const Vec x = lu.solve(b);
    if (!region.contains(x, tol * (1.0 + x.lpNorm<Eigen::Infinity>()))) return;
    for (const auto& v : out) {
      if ((v - x).norm() <= tol * (1.0 + x.norm())) return;
    }
    out.push_back(x);
  });
  return out;
}

std::optional<Vec> nearest_point_to_origin(const Polyhedron& region, double tol) {
  const int n = region.dim;
  const int m = static_cast<int>(region.constraints.size());
  std::optional<Vec> best;
  double best_norm = kInf;
  const Vec zero = Vec::Zero(n);
  if (region.contains(zero, tol)) return zero;
  for (int k = 1; k <= std::min(n, m); ++k) {
    for_each_subset(m, k, [&](const std::vector<int>& idx) {
      Mat a(k, n);
      Vec b(k);
      for (int r = 0; r < k; ++r) {
        const auto& c = region.constraints[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
        a.row(r) = c.normal.transpose();
        b[r] = c.offset;
      }
      // Minimum-norm solution of a x = b, i.e. the projection of the origin onto the
      // affine hull of this face.
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
      if (cod.rank() < k) return;
      const Vec x = cod.solve(b);
      if ((a * x - b).norm() > tol * (1.0 + b.norm())) return;
      if (!region.contains(x, tol * (1.0 + x.norm()))) return;
      const double nx = x.norm();
      if (nx < best_norm) {
        best_norm = nx;
        best = x;
      }
    });
  }
  return best;
}

Mat reflection_to_minus_last_axis(const Vec& u) {
  const auto n = u.size();
  Vec w = u;
  w[n - 1] += 1.0;
  const double ww = w.squaredNorm();
  if (ww < 1e-24) return Mat::Identity(n, n);
  return Mat::Identity(n, n) - (2.0 / ww) * w * w.transpose();
}

}  // namespace gaussmink
