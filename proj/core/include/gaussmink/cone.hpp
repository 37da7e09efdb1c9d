#pragma once

#include <cstddef>
#include <vector>

#include "gaussmink/polyhedron.hpp"

namespace gaussmink {

/// Default interiority margin δ for normal directions.
inline constexpr double kDefaultInteriorityMargin = 1e-6;

/// A pointed, full-dimensional polyhedral cone C with both representations.
///
/// Generators are stored normalized. Halfspace normals a_k are unit outward
/// normals, C = {x : <x, a_k> <= 0}; they also generate the polar cone C°.
class PolyhedralCone {
 public:
  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& generators() const noexcept { return generators_; }
  const std::vector<Vec>& halfspace_normals() const noexcept { return normals_; }
  const std::vector<Vec>& polar_generators() const noexcept { return normals_; }

  /// Reference direction 𝔳, interior to both C and -C°.
  const Vec& ref_dir() const noexcept { return ref_dir_; }

  bool contains(const Vec& x, double tol = kMembershipTol) const;
  /// Strict interior test: <x, a_k> < -tol for every facet normal.
  bool contains_interior(const Vec& x, double tol = kMembershipTol) const;

  /// C as a polyhedron in R^n (facet halfspaces with zero offsets).
  Polyhedron as_polyhedron() const;

 private:
  friend PolyhedralCone make_cone(const std::vector<Vec>& generators);

  int dim_ = 0;
  std::vector<Vec> generators_;
  std::vector<Vec> normals_;
  Vec ref_dir_;
};

/// Builds a cone from its generators.
/// Throws Error{EmptyInput, InvalidArgument, DimensionMismatch, NotPointed, NotFullDimensional}.
PolyhedralCone make_cone(const std::vector<Vec>& generators);

/// The polar cone C° = {x : <x, y> <= 0 for all y in C}.
PolyhedralCone polar_cone(const PolyhedralCone& cone);

/// Finite set of unit normals strictly inside C°.
class DirectionSet {
 public:
  std::size_t size() const noexcept { return dirs_.size(); }
  const Vec& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<Vec>& dirs() const noexcept { return dirs_; }
  double interiority_margin() const noexcept { return margin_; }
  /// Per-direction margin min_g -<u_i, g/|g|>.
  const std::vector<double>& margins() const noexcept { return margins_; }

 private:
  friend DirectionSet validate_directions(const PolyhedralCone&, const std::vector<Vec>&, double);

  std::vector<Vec> dirs_;
  std::vector<double> margins_;
  double margin_ = kDefaultInteriorityMargin;
};

/// Accepts `dirs` iff each is a unit vector with <u, g> <= -δ|g| for every generator
/// and no two coincide. Throws Error{NotUnitVector, NotInteriorToPolar, DuplicateDirection, ...}.
DirectionSet validate_directions(const PolyhedralCone& cone, const std::vector<Vec>& dirs,
                                 double delta = kDefaultInteriorityMargin);

enum class FacetShape { Empty, Point, Bounded, Unbounded, Unresolved };

/// The part of ∂K lying on the hyperplane <x, u_i> = -h_i, in an affine frame.
///
/// `region` lives in frame coordinates y in R^{n-1}; the boundary point is
/// origin + frame * y. For n = 2 the region is `interval`; for n = 3 `polygon`
/// holds its vertices (clipped to a large box when unbounded). Higher dimensions
/// are left Unresolved and handled by sampling.
struct FacetRegion {
  std::size_t index = 0;
  Vec origin;
  Mat frame;
  Polyhedron region;
  FacetShape shape = FacetShape::Empty;
  Interval interval;
  std::vector<Eigen::Vector2d> polygon;

  bool empty() const noexcept { return shape == FacetShape::Empty; }
  bool bounded() const noexcept { return shape == FacetShape::Bounded || shape == FacetShape::Point; }
};

/// A Wulff shape [h] = C ∩ ⋂_i {x : <x, u_i> <= -h_i}: a C-pseudo-cone determined by ω.
/// Immutable; the facet cache is built at construction.
class PseudoCone {
 public:
  PseudoCone(PolyhedralCone cone, DirectionSet omega, Vec h);

  const PolyhedralCone& cone() const noexcept { return cone_; }
  const DirectionSet& directions() const noexcept { return omega_; }
  const Vec& support() const noexcept { return h_; }
  int dim() const noexcept { return cone_.dim(); }
  std::size_t size() const noexcept { return omega_.size(); }

  const std::vector<FacetRegion>& facets() const noexcept { return facets_; }
  const FacetRegion& facet(std::size_t i) const { return facets_.at(i); }
  /// Indices whose facet is empty (constraint redundant on C).
  std::vector<std::size_t> empty_facets() const;

  /// Constraints of K: cone facets first, then the Wulff halfspaces in ω order.
  const Polyhedron& as_polyhedron() const noexcept { return poly_; }
  std::size_t wulff_constraint_offset() const noexcept { return cone_.halfspace_normals().size(); }

  /// A point strictly inside K (a far translate along 𝔳).
  const Vec& interior_point() const noexcept { return interior_; }

  /// Same cone and directions with new support values.
  PseudoCone with_support(Vec h) const;

 private:
  void build();

  PolyhedralCone cone_;
  DirectionSet omega_;
  Vec h_;
  Polyhedron poly_;
  Vec interior_;
  std::vector<FacetRegion> facets_;
};

/// Throws Error{NonPositiveSupport, DimensionMismatch}.
PseudoCone wulff_shape(const PolyhedralCone& cone, const DirectionSet& omega, const Vec& h);

/// x ∈ C and <x, u_i> <= -h_i for all i, up to `tol` on each inner product.
bool contains(const PseudoCone& k, const Vec& x, double tol = kMembershipTol);

struct RadialPoint {
  double rho = 0.0;
  std::size_t active = 0;  // α_K(v) = u_active
};

/// ρ_K(v) = max_i h_i / (-<v, u_i>) for v ∈ int C; ties go to the lowest index.
/// Throws Error{DirectionNotInteriorToCone, NotUnitVector}.
RadialPoint radial_function(const PseudoCone& k, const Vec& v);

const FacetRegion& facet_region(const PseudoCone& k, std::size_t i);

/// Absolute support values h̄_K(u_i) = min_{x∈K} -<x, u_i>; h̄_K(u_i) >= h_i with
/// equality iff the i-th constraint touches K.
Vec support_values(const PseudoCone& k);

/// dist(o, K).
double distance_to_origin(const PseudoCone& k);

/// Vertices of K (n <= 3 in practice).
std::vector<Vec> vertices(const PseudoCone& k);

}  // namespace gaussmink
