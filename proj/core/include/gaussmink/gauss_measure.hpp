#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "gaussmink/cone.hpp"

namespace gaussmink {

enum class Method { MonteCarlo, Quadrature2d, Exact1d };
std::string_view to_string(Method m);

/// Which estimator family to use. Auto picks the deterministic path for n <= 2.
enum class EstimatorPath { Auto, Deterministic, MonteCarlo };

struct EstimatorConfig {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 0;
  int quadrature_steps = 512;
  double target_abs_error = 1e-12;
  EstimatorPath path = EstimatorPath::Auto;
  unsigned workers = 1;

  /// Throws Error{InvalidArgument} unless n_samples >= 1e4, quadrature_steps >= 64
  /// and target_abs_error > 0.
  void validate() const;

  /// True when `dim` is handled deterministically. Throws DimensionUnsupported if
  /// the deterministic path was requested for dim > 2.
  bool deterministic_for(int dim) const;
};

/// A measure value with its uncertainty. Monte Carlo results carry a 1σ
/// `std_error`; deterministic results carry a certified `error_bound` and zero
/// std_error. Consumers combine the two in quadrature.
struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double error_bound = 0.0;
  Method method = Method::Exact1d;
  std::int64_t samples_or_steps = 0;
  std::optional<std::uint64_t> seed;

  double combined_error() const;
};

/// Stream tags keep independent uses of one seed apart.
namespace stream_tag {
inline constexpr std::uint32_t kVolume = 0;
inline constexpr std::uint32_t kFacet = 1;
inline constexpr std::uint32_t kSphere = 2;
inline constexpr std::uint32_t kBall = 3;
}  // namespace stream_tag

/// γⁿ(K) for a Wulff shape.
MeasureEstimate gaussian_volume(const PseudoCone& k, const EstimatorConfig& cfg = {});
/// γⁿ(C).
MeasureEstimate gaussian_volume(const PolyhedralCone& c, const EstimatorConfig& cfg = {});

/// γ^d of a d-dimensional polyhedron given in its own coordinates: exact for
/// d <= 1, Monte Carlo for d >= 2.
MeasureEstimate gaussian_measure_polyhedron(const Polyhedron& region, const EstimatorConfig& cfg = {});

/// γ² of a planar region whose sections orthogonal to `axis` are bounded and that
/// lies in {<x, axis> >= 0}. Composite Simpson along the axis with panels split at
/// every pairwise constraint intersection; the cross-section is integrated exactly.
MeasureEstimate planar_gaussian_volume(const Polyhedron& region, const Vec& axis, const EstimatorConfig& cfg);

/// Upper bound on γⁿ(Rⁿ \ rB): 2n√n / (√(2π) r) · e^{-r²/(2n)}.
double tail_bound(double r, int n);

/// Smallest r (to relative precision 1e-3) with tail_bound(r, n) <= eps.
double truncation_radius(double eps, int n);

/// Gaussian covolume V_G(K) = γⁿ(C \ K).
MeasureEstimate covolume(const PseudoCone& k, const EstimatorConfig& cfg = {});

/// Monte Carlo estimate of γⁿ(Rⁿ \ rB).
MeasureEstimate ball_complement_mc(double r, int n, const EstimatorConfig& cfg);

}  // namespace gaussmink
