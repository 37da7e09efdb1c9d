#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace gaussmink {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Absolute tolerance on inner products for membership tests. All constraint data
/// is O(1) after normalization, so an absolute bound is adequate.
inline constexpr double kMembershipTol = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed halfspace {x : <normal, x> <= offset}.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

/// Intersection of finitely many halfspaces in R^dim (dim may be 0).
struct Polyhedron {
  int dim = 0;
  std::vector<Halfspace> constraints;

  bool contains(const Vec& x, double tol = kMembershipTol) const;
};

/// Closed interval, possibly half-infinite; `empty` when lo >= hi.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty() const { return !(hi > lo); }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

/// Feasible set of a one-dimensional polyhedron.
Interval interval_of(const Polyhedron& region);

/// Vertices (counter-clockwise) of a planar polyhedron clipped to the box [-box, box]^2.
/// Empty when the feasible set has no interior.
std::vector<Eigen::Vector2d> clip_polygon(const Polyhedron& region, double box);

double polygon_area(const std::vector<Eigen::Vector2d>& poly);

/// All vertices of a pointed polyhedron by brute force over dim-subsets of the
/// constraints. Intended for the small instances this library targets.
std::vector<Vec> enumerate_vertices(const Polyhedron& region, double tol = 1e-10);

/// Euclidean projection of the origin onto a nonempty polyhedron, by brute force
/// over active sets of size <= dim. Returns nullopt if the polyhedron is empty.
std::optional<Vec> nearest_point_to_origin(const Polyhedron& region, double tol = 1e-10);

/// Orthogonal matrix Q (a Householder reflection) with Q * u = -e_n for the unit
/// vector u. Its first n-1 columns form an orthonormal basis of u^perp.
Mat reflection_to_minus_last_axis(const Vec& u);

}  // namespace gaussmink
