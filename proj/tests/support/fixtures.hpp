#pragma once

#include <cmath>

#include "gaussmink/instances.hpp"
#include "gaussmink/surface_measure.hpp"
#include "oracles.hpp"

namespace fixtures {

using gaussmink::Vec;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec diag_dir() { return vec({-1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}); }

// Quarter plane cut by x + y >= √2: the facet is the segment from (√2,0) to (0,√2).
inline gaussmink::PseudoCone diag1(double h = 1.0) {
  const auto c = gaussmink::quarter_plane();
  return gaussmink::PseudoCone(c, gaussmink::validate_directions(c, {diag_dir()}), vec({h}));
}

inline gaussmink::PseudoCone half_line_at(double a) {
  const auto c = gaussmink::half_line();
  return gaussmink::PseudoCone(c, gaussmink::validate_directions(c, {vec({-1.0})}), vec({a}));
}

inline oracle::Planar to_planar(const gaussmink::PseudoCone& k) {
  oracle::Planar out;
  const auto& gens = k.cone().generators();
  out.g0 = gens.at(0).head<2>();
  out.g1 = gens.at(1).head<2>();
  for (std::size_t i = 0; i < k.size(); ++i) {
    out.u.push_back(k.directions()[i].head<2>());
    out.h.push_back(k.support()[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

// Gaussian L_p surface density on a facet of a planar shape.
inline double sp_density(const Eigen::Vector2d& x, double h, double p) {
  return std::pow(h, 1.0 - p) * std::exp(-0.5 * x.squaredNorm()) / (2.0 * static_cast<double>(oracle::kPi));
}

}  // namespace fixtures
