#pragma once

#include <cstddef>

#include "gaussmink/cone.hpp"
#include "gaussmink/rng.hpp"

namespace gaussmink {

/// Standard small cones used by examples, tests and benchmarks.
PolyhedralCone half_line();                     // [0, ∞) ⊂ R
PolyhedralCone quarter_plane();                 // R²₊
PolyhedralCone octant();                        // R³₊
PolyhedralCone planar_cone(double axis_angle, double half_aperture);

/// Planar cone with a random axis and half-aperture in [0.3, 1.3] rad.
PolyhedralCone random_planar_cone(CounterRng& rng);

/// m distinct unit normals inside C° (n = 2), each at least `margin` (in the
/// convex-combination parameter) away from the boundary of C°.
DirectionSet random_planar_directions(const PolyhedralCone& cone, std::size_t m, CounterRng& rng,
                                      double margin = 0.05);

/// m independent uniforms on [lo, hi].
Vec random_vector(std::size_t m, CounterRng& rng, double lo, double hi);

struct PlanarInstance {
  PolyhedralCone cone;
  DirectionSet omega;
  Vec h;

  PseudoCone shape() const { return PseudoCone(cone, omega, h); }
};

/// Random cone, m directions and support values in [0.5, 2].
PlanarInstance random_planar_instance(CounterRng& rng, std::size_t m);

}  // namespace gaussmink
