#pragma once

#include "gaussmink/surface_measure.hpp"

namespace gaussmink {

/// Prescribed measure μ: strictly positive weights on the directions of ω.
class DiscreteMeasure {
 public:
  /// Throws Error{EmptyInput, InvalidArgument} unless every weight is finite and > 0.
  explicit DiscreteMeasure(Vec weights);

  const Vec& weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
  double operator[](std::size_t i) const { return w_[static_cast<Eigen::Index>(i)]; }
  double total() const { return w_.sum(); }
  DiscreteMeasure scaled(double lambda) const { return DiscreteMeasure(lambda * w_); }

 private:
  Vec w_;
};

/// g_i = h_i^p. The variational formulas are linear in g.
struct GCoordinates {
  Vec g;
  double p = 1.0;

  static GCoordinates from_support(const Vec& h, double p);
  Vec to_support() const;
};

/// A vector-valued estimate with a per-component uncertainty (1σ and bound combined).
struct VectorEstimate {
  Vec value;
  Vec error;
};

/// ∫ h^p dμ = Σ_i h_i^p μ_i.
double moment(const Vec& h, const DiscreteMeasure& mu, double p);

/// I_μ(h) = γⁿ([h]) Σ h_i^p μ_i for p > 0.
MeasureEstimate functional_I(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg = {});

/// φ_μ(h) = γⁿ([h]) / Σ h_i^p μ_i for p < 0.
MeasureEstimate functional_phi(const PseudoCone& k, const DiscreteMeasure& mu, double p,
                               const EstimatorConfig& cfg = {});

/// ∂γⁿ([g^{1/p}])/∂g_i = -(1/p) S_{p,i}.
VectorEstimate grad_volume_in_g(const PseudoCone& k, double p, const EstimatorConfig& cfg = {});

/// ∂I/∂g_i = -(1/p) S_{p,i} Σ_j g_j μ_j + γⁿ μ_i.
VectorEstimate grad_I_in_g(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg = {});

/// ∂φ/∂g_i = [-(1/p) S_{p,i} Σ_j g_j μ_j - γⁿ μ_i] / (Σ_j g_j μ_j)².
VectorEstimate grad_phi_in_g(const PseudoCone& k, const DiscreteMeasure& mu, double p,
                             const EstimatorConfig& cfg = {});

/// Default central-difference step: 1e-4 · min_i g_i.
double default_fd_step(const PseudoCone& k, double p);

/// The Wulff shape with support (h^p + t f)^{1/p}. Throws StepTooLarge if some
/// h_i^p + t f_i <= 0.
PseudoCone perturbed(const PseudoCone& k, const Vec& f, double p, double t);

/// Central difference of t ↦ γⁿ([(h^p + t f)^{1/p}]) at 0. Both evaluations draw
/// from the stream selected by `cfg.seed`, so Monte Carlo noise cancels in the
/// overlap of the two shapes. Throws StepTooLarge.
MeasureEstimate fd_volume_derivative(const PseudoCone& k, const Vec& f, double p, double step,
                                     const EstimatorConfig& cfg = {});

/// Same for the covolume γⁿ(C \ [h_t]); equals minus the volume derivative.
MeasureEstimate fd_covolume_derivative(const PseudoCone& k, const Vec& f, double p, double step,
                                       const EstimatorConfig& cfg = {});

struct RadialDerivative {
  double fd = 0.0;
  double analytic = 0.0;
};

/// d/dt ρ_{[h_t]}(v) at t = 0 for h_t = (h^p + t f)^{1/p}: a central difference of
/// the closed-form radial function against f_a ρ_K(v) / (p h_a^p), a = α_K(v).
/// Throws SwitchPointTooClose if the active facet changes within ±step.
RadialDerivative radial_derivative_check(const PseudoCone& k, const Vec& f, const Vec& v, double p, double step);

}  // namespace gaussmink
