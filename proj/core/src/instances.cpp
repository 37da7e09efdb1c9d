#include "gaussmink/instances.hpp"

#include <cmath>

#include "gaussmink/error.hpp"

namespace gaussmink {

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

PolyhedralCone half_line() { return make_cone({Vec::Ones(1)}); }

PolyhedralCone quarter_plane() { return make_cone({vec2(1.0, 0.0), vec2(0.0, 1.0)}); }

PolyhedralCone octant() {
  return make_cone({Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)});
}

PolyhedralCone planar_cone(double axis_angle, double half_aperture) {
  if (!(half_aperture > 0.0 && half_aperture < 0.5 * std::acos(-1.0))) {
    throw Error(ErrorKind::InvalidArgument, "half aperture must lie in (0, π/2)");
  }
  const double a = axis_angle - half_aperture;
  const double b = axis_angle + half_aperture;
  return make_cone({vec2(std::cos(a), std::sin(a)), vec2(std::cos(b), std::sin(b))});
}

PolyhedralCone random_planar_cone(CounterRng& rng) {
  const double axis = rng.uniform(0.0, 2.0 * std::acos(-1.0));
  return planar_cone(axis, rng.uniform(0.3, 1.3));
}

DirectionSet random_planar_directions(const PolyhedralCone& cone, std::size_t m, CounterRng& rng, double margin) {
  if (cone.dim() != 2) throw Error(ErrorKind::DimensionUnsupported, "random directions are generated for n = 2 only");
  const auto& a = cone.polar_generators();
  std::vector<Vec> dirs;
  while (dirs.size() < m) {
    const double lambda = rng.uniform(margin, 1.0 - margin);
    const Vec u = (lambda * a[0] + (1.0 - lambda) * a[1]).normalized();
    bool fresh = true;
    for (const auto& d : dirs) fresh = fresh && d.dot(u) < 1.0 - 1e-6;
    if (fresh) dirs.push_back(u);
  }
  return validate_directions(cone, dirs);
}

Vec random_vector(std::size_t m, CounterRng& rng, double lo, double hi) {
  Vec out(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.uniform(lo, hi);
  return out;
}

PlanarInstance random_planar_instance(CounterRng& rng, std::size_t m) {
  auto cone = random_planar_cone(rng);
  auto omega = random_planar_directions(cone, m, rng);
  Vec h = random_vector(m, rng, 0.5, 2.0);
  return {std::move(cone), std::move(omega), std::move(h)};
}

}  // namespace gaussmink
