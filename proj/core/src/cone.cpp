#include "gaussmink/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gaussmink/error.hpp"

namespace gaussmink {

namespace {

constexpr double kSideTol = 1e-12;
constexpr double kRankTol = 1e-10;
constexpr double kUnitTol = 1e-9;
// cos of the angular tolerance (1e-6 rad) below which two directions coincide.
constexpr double kDuplicateCos = 1.0 - 5e-13;
constexpr double kFacetBox = 1e6;

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

bool same_direction(const Vec& a, const Vec& b) { return a.dot(b) > kDuplicateCos; }

// Unit outward facet normals of the cone spanned by `pts` in R^r. No facets means
// the cone is the whole space.
std::vector<Vec> facet_normals(const std::vector<Vec>& pts, int r) {
  std::vector<Vec> normals;
  auto add = [&](const Vec& n) {
    for (const auto& e : normals) {
      if (same_direction(e, n)) return;
    }
    normals.push_back(n);
  };
  if (r == 1) {
    const bool any_pos = std::any_of(pts.begin(), pts.end(), [](const Vec& p) { return p[0] > 0.0; });
    const bool any_neg = std::any_of(pts.begin(), pts.end(), [](const Vec& p) { return p[0] < 0.0; });
    if (any_pos && !any_neg) add(Vec::Constant(1, -1.0));
    if (any_neg && !any_pos) add(Vec::Constant(1, 1.0));
    return normals;
  }
  const int k = static_cast<int>(pts.size());
  for_each_subset(k, r - 1, [&](const std::vector<int>& idx) {
    Mat a(r - 1, r);
    for (int row = 0; row < r - 1; ++row) a.row(row) = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(row)])].transpose();
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv[r - 2] <= kRankTol * std::max(1.0, sv[0])) return;
    Vec n = svd.matrixV().col(r - 1);
    double lo = kInf;
    double hi = -kInf;
    for (const auto& p : pts) {
      const double d = n.dot(p);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (hi <= kSideTol && lo < -kSideTol) {
      add(n.normalized());
    } else if (lo >= -kSideTol && hi > kSideTol) {
      add((-n).normalized());
    }
  });
  return normals;
}

int rank_of(const std::vector<Vec>& vs, int dim) {
  if (vs.empty()) return 0;
  Mat m(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTol * std::max(1.0, sv[0])) ++r;
  }
  return r;
}

bool strictly_inside_both(const Vec& v, const std::vector<Vec>& gens, const std::vector<Vec>& normals) {
  return std::all_of(normals.begin(), normals.end(), [&](const Vec& a) { return v.dot(a) < -kSideTol; }) &&
         std::all_of(gens.begin(), gens.end(), [&](const Vec& g) { return v.dot(g) > kSideTol; });
}

// Normalized mean of the generators; if that misses int(-C°) (possible only for
// wide cones in n >= 3), fall back to a perceptron pass over the strict system
// <v, g> > 0, <v, -a> > 0.
Vec choose_reference_direction(const std::vector<Vec>& gens, const std::vector<Vec>& normals) {
  Vec v = Vec::Zero(gens.front().size());
  for (const auto& g : gens) v += g;
  v.normalize();
  if (strictly_inside_both(v, gens, normals)) return v;

  std::vector<Vec> rows = gens;
  for (const auto& a : normals) rows.push_back(-a);
  Vec w = v;
  for (int iter = 0; iter < 100000; ++iter) {
    const Vec wn = w.normalized();
    auto bad = std::find_if(rows.begin(), rows.end(), [&](const Vec& c) { return wn.dot(c) <= 1e-9; });
    if (bad == rows.end()) return wn;
    w += *bad;
  }
  throw Error(ErrorKind::InvalidArgument, "no reference direction interior to both C and -C° was found");
}

}  // namespace

bool PolyhedralCone::contains(const Vec& x, double tol) const {
  return std::all_of(normals_.begin(), normals_.end(), [&](const Vec& a) { return a.dot(x) <= tol; });
}

bool PolyhedralCone::contains_interior(const Vec& x, double tol) const {
  return std::all_of(normals_.begin(), normals_.end(), [&](const Vec& a) { return a.dot(x) < -tol; });
}

Polyhedron PolyhedralCone::as_polyhedron() const {
  Polyhedron p{dim_, {}};
  for (const auto& a : normals_) p.constraints.push_back({a, 0.0});
  return p;
}

PolyhedralCone make_cone(const std::vector<Vec>& generators) {
  if (generators.empty()) throw Error(ErrorKind::EmptyInput, "cone needs at least one generator");
  const auto n = generators.front().size();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "cone dimension must be at least 1");

  std::vector<Vec> gens;
  for (std::size_t j = 0; j < generators.size(); ++j) {
    const auto& g = generators[j];
    if (g.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "generator " + std::to_string(j) + " has wrong dimension", {j});
    }
    if (!g.allFinite() || g.norm() == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "generator " + std::to_string(j) + " is zero or not finite", {j});
    }
    Vec u = g.normalized();
    if (std::none_of(gens.begin(), gens.end(), [&](const Vec& e) { return same_direction(e, u); })) {
      gens.push_back(std::move(u));
    }
  }

  const int dim = static_cast<int>(n);
  const int r = rank_of(gens, dim);

  // Pointedness is decided inside span(generators): the cone contains a line iff
  // its facet normals fail to span that subspace.
  Mat basis;
  {
    Mat g(dim, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gens[j];
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU);
    basis = svd.matrixU().leftCols(r);
  }
  std::vector<Vec> coords;
  coords.reserve(gens.size());
  for (const auto& g : gens) coords.emplace_back(basis.transpose() * g);
  const auto sub_normals = facet_normals(coords, r);
  if (rank_of(sub_normals, r) < r) {
    throw Error(ErrorKind::NotPointed, "generators are not contained in an open halfspace (the cone contains a line)");
  }
  if (r < dim) {
    std::ostringstream msg;
    msg << "generators span a " << r << "-dimensional subspace of R^" << dim;
    throw Error(ErrorKind::NotFullDimensional, msg.str());
  }

  PolyhedralCone cone;
  cone.dim_ = dim;
  cone.generators_ = std::move(gens);
  cone.normals_.reserve(sub_normals.size());
  for (const auto& a : sub_normals) cone.normals_.emplace_back((basis * a).normalized());
  std::sort(cone.normals_.begin(), cone.normals_.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  cone.ref_dir_ = choose_reference_direction(cone.generators_, cone.normals_);
  return cone;
}

PolyhedralCone polar_cone(const PolyhedralCone& cone) { return make_cone(cone.polar_generators()); }

DirectionSet validate_directions(const PolyhedralCone& cone, const std::vector<Vec>& dirs, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "interiority margin must be positive");
  if (dirs.empty()) throw Error(ErrorKind::EmptyInput, "direction set is empty");
  DirectionSet out;
  out.margin_ = delta;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& u = dirs[i];
    if (u.size() != cone.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "direction " + std::to_string(i) + " has wrong dimension", {i});
    }
    if (!u.allFinite() || std::abs(u.norm() - 1.0) > kUnitTol) {
      throw Error(ErrorKind::NotUnitVector, "direction " + std::to_string(i) + " is not a unit vector", {i});
    }
    double margin = kInf;
    for (const auto& g : cone.generators()) margin = std::min(margin, -u.dot(g));
    if (margin < delta) {
      std::ostringstream msg;
      msg << "direction " << i << " has interiority margin " << margin << " < " << delta;
      throw Error(ErrorKind::NotInteriorToPolar, msg.str(), {i});
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (same_direction(out.dirs_[j], u)) {
        throw Error(ErrorKind::DuplicateDirection,
                    "directions " + std::to_string(j) + " and " + std::to_string(i) + " coincide", {j, i});
      }
    }
    out.dirs_.push_back(u);
    out.margins_.push_back(margin);
  }
  return out;
}

PseudoCone::PseudoCone(PolyhedralCone cone, DirectionSet omega, Vec h)
    : cone_(std::move(cone)), omega_(std::move(omega)), h_(std::move(h)) {
  if (static_cast<std::size_t>(h_.size()) != omega_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "support vector length differs from the number of directions");
  }
  for (Eigen::Index i = 0; i < h_.size(); ++i) {
    if (!(h_[i] > 0.0) || !std::isfinite(h_[i])) {
      throw Error(ErrorKind::NonPositiveSupport, "support value " + std::to_string(i) + " must be positive and finite",
                  {static_cast<std::size_t>(i)});
    }
  }
  build();
}

void PseudoCone::build() {
  const int n = cone_.dim();
  poly_ = cone_.as_polyhedron();
  for (std::size_t i = 0; i < omega_.size(); ++i) poly_.constraints.push_back({omega_[i], -h_[static_cast<Eigen::Index>(i)]});

  const Vec& v = cone_.ref_dir();
  double lambda = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    lambda = std::max(lambda, h_[static_cast<Eigen::Index>(i)] / (-v.dot(omega_[i])));
  }
  interior_ = (2.0 * lambda + 1.0) * v;

  const std::size_t offset = wulff_constraint_offset();
  facets_.clear();
  facets_.reserve(omega_.size());
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    FacetRegion f;
    f.index = i;
    const Vec& u = omega_[i];
    f.origin = -h_[static_cast<Eigen::Index>(i)] * u;
    f.frame = reflection_to_minus_last_axis(u).leftCols(n - 1);
    f.region.dim = n - 1;
    for (std::size_t j = 0; j < poly_.constraints.size(); ++j) {
      if (j == offset + i) continue;
      const auto& c = poly_.constraints[j];
      f.region.constraints.push_back({f.frame.transpose() * c.normal, c.offset - c.normal.dot(f.origin)});
    }
    if (n == 1) {
      const bool ok = std::all_of(f.region.constraints.begin(), f.region.constraints.end(),
                                  [](const Halfspace& c) { return c.offset >= -kMembershipTol; });
      f.shape = ok ? FacetShape::Point : FacetShape::Empty;
    } else if (n == 2) {
      f.interval = interval_of(f.region);
      if (f.interval.length() <= 1e-12) {
        f.shape = FacetShape::Empty;
      } else {
        f.shape = std::isfinite(f.interval.lo) && std::isfinite(f.interval.hi) ? FacetShape::Bounded
                                                                             : FacetShape::Unbounded;
      }
    } else if (n == 3) {
      f.polygon = clip_polygon(f.region, kFacetBox);
      double perimeter = 0.0;
      for (std::size_t k = 0; k < f.polygon.size(); ++k) {
        perimeter += (f.polygon[(k + 1) % f.polygon.size()] - f.polygon[k]).norm();
      }
      if (f.polygon.size() < 3 || polygon_area(f.polygon) <= 1e-12 * perimeter) {
        f.polygon.clear();
        f.shape = FacetShape::Empty;
      } else {
        const bool touches_box = std::any_of(f.polygon.begin(), f.polygon.end(), [](const Eigen::Vector2d& p) {
          return p.cwiseAbs().maxCoeff() >= kFacetBox * (1.0 - 1e-9);
        });
        f.shape = touches_box ? FacetShape::Unbounded : FacetShape::Bounded;
      }
    } else {
      f.shape = FacetShape::Unresolved;
    }
    facets_.push_back(std::move(f));
  }
}

std::vector<std::size_t> PseudoCone::empty_facets() const {
  std::vector<std::size_t> out;
  for (const auto& f : facets_) {
    if (f.empty()) out.push_back(f.index);
  }
  return out;
}

PseudoCone PseudoCone::with_support(Vec h) const { return PseudoCone(cone_, omega_, std::move(h)); }

PseudoCone wulff_shape(const PolyhedralCone& cone, const DirectionSet& omega, const Vec& h) {
  return PseudoCone(cone, omega, h);
}

bool contains(const PseudoCone& k, const Vec& x, double tol) { return k.as_polyhedron().contains(x, tol); }

RadialPoint radial_function(const PseudoCone& k, const Vec& v) {
  if (v.size() != k.dim()) throw Error(ErrorKind::DimensionMismatch, "radial direction has wrong dimension");
  if (std::abs(v.norm() - 1.0) > kUnitTol) throw Error(ErrorKind::NotUnitVector, "radial direction must be a unit vector");
  if (!k.cone().contains_interior(v)) {
    throw Error(ErrorKind::DirectionNotInteriorToCone, "radial direction is not in the interior of C");
  }
  RadialPoint best{-kInf, 0};
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double rho = k.support()[static_cast<Eigen::Index>(i)] / (-v.dot(k.directions()[i]));
    if (rho > best.rho) best = {rho, i};
  }
  return best;
}

const FacetRegion& facet_region(const PseudoCone& k, std::size_t i) {
  if (i >= k.size()) throw Error(ErrorKind::InvalidArgument, "facet index out of range", {i});
  return k.facet(i);
}

std::vector<Vec> vertices(const PseudoCone& k) { return enumerate_vertices(k.as_polyhedron()); }

Vec support_values(const PseudoCone& k) {
  const auto verts = vertices(k);
  Vec out(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) {
    double best = kInf;
    for (const auto& x : verts) best = std::min(best, -x.dot(k.directions()[i]));
    // Guard against roundoff pulling the value below the defining constraint.
    out[static_cast<Eigen::Index>(i)] = std::max(best, k.support()[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

double distance_to_origin(const PseudoCone& k) {
  const auto x = nearest_point_to_origin(k.as_polyhedron());
  if (!x) throw Error(ErrorKind::InvalidArgument, "Wulff shape unexpectedly empty");
  return x->norm();
}

}  // namespace gaussmink
