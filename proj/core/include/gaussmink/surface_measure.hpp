#pragma once

#include <functional>
#include <vector>

#include "gaussmink/gauss_measure.hpp"

namespace gaussmink {

/// Per-direction values of S_{p,γⁿ}(K, {u_i}).
struct SurfaceMeasureVector {
  Vec values;
  Vec std_errors;
  Vec error_bounds;
  double p = 1.0;
  Method method = Method::Exact1d;

  Vec combined_errors() const;
  double total() const { return values.sum(); }
};

/// Gaussian surface area of facet i:
///   S_{γⁿ}(K, {u_i}) = (2π)^{-n/2} ∫_{F_i} e^{-|x|²/2} dH^{n-1}
///                    = (2π)^{-1/2} e^{-h_i²/2} γ^{n-1}(facet region).
/// Empty facets give exactly 0.
MeasureEstimate facet_gaussian_area(const PseudoCone& k, std::size_t i, const EstimatorConfig& cfg = {});

/// S_{p,γⁿ}(K, {u_i}) = h_i^{1-p} S_{γⁿ}(K, {u_i}); on a facet |<x, ν>| is constant h_i.
MeasureEstimate sp_measure(const PseudoCone& k, std::size_t i, double p, const EstimatorConfig& cfg = {});

SurfaceMeasureVector sp_measure_vector(const PseudoCone& k, double p, const EstimatorConfig& cfg = {});

/// Weight F(x, ν) evaluated at a boundary point with outer unit normal ν.
using BoundaryWeight = std::function<double(const Vec& x, const Vec& normal)>;

/// (2π)^{-n/2} |<x, ν>|^{1-p} e^{-|x|²/2}: the density whose facet integrals are S_p.
BoundaryWeight gaussian_surface_density(double p);

/// ∫_{∂K ∩ facet i} F dH^{n-1} for every i, computed through the radial map:
///   ∫_{Ω_C} F(r_K(v)) ρ_K(v)^{n-1} / |<v, α_K(v)>| dv.
/// n = 2: composite Simpson in the angle with panels split where the active facet
/// changes. n = 3: Monte Carlo over directions in Ω_C. Throws DimensionUnsupported otherwise.
std::vector<MeasureEstimate> radial_transform_facets(const PseudoCone& k, const BoundaryWeight& f,
                                                     const EstimatorConfig& cfg = {});

/// Sum of radial_transform_facets over all facets.
MeasureEstimate radial_transform_integral(const PseudoCone& k, const BoundaryWeight& f,
                                          const EstimatorConfig& cfg = {});

/// s(t) = ∫_{C ∩ {<x,v> = -t}} e^{-|y|²/2} dH^{n-1}(y), without the (2π)^{-n/2}
/// normalization. Deterministic for n <= 2, Monte Carlo for n = 3.
MeasureEstimate section_gaussian_area(const PolyhedralCone& c, const Vec& v, double t,
                                      const EstimatorConfig& cfg = {});

}  // namespace gaussmink
