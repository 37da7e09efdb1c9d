#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaussmink/variational.hpp"

namespace gaussmink {

struct ArmijoConfig {
  double shrink = 0.5;
  double slope = 1e-4;
};

struct SolverConfig {
  int max_iters = 5000;
  double residual_tol = 1e-6;  // on the relative ℓ¹ residual
  std::optional<Vec> initial_h;  // empty: auto_initialize
  ArmijoConfig armijo;
  double min_step = 1e-14;
  double g_floor = 1e-8;
  EstimatorConfig estimator;

  /// Throws Error{InvalidArgument} on out-of-range settings.
  void validate() const;
};

enum class SolverStatus { Converged, NotConverged, DegenerateDirection };
std::string_view to_string(SolverStatus s);

struct TraceRow {
  int iteration = 0;
  double functional = 0.0;
  double rel_residual = 0.0;
  double step = 0.0;
  double distance = 0.0;
};

struct SolverResult {
  Vec h_star;
  double c = 0.0;
  Vec residual;
  double rel_residual = 0.0;
  double rel_residual_sigma = 0.0;  // 1σ of rel_residual on the Monte Carlo path
  double functional_value = 0.0;
  int iterations = 0;
  bool converged = false;
  SolverStatus status = SolverStatus::NotConverged;
  std::string message;
  std::vector<std::size_t> degenerate;  // μ-charged directions whose facet stayed empty
  std::vector<TraceRow> trace;
  double min_distance = 0.0;
  double max_distance = 0.0;
};

struct ResidualReport {
  Vec residual;
  double rel = 0.0;
  double c = 0.0;
  double rel_sigma = 0.0;
};

/// Normalization c = ±Σ h^p μ / (p γⁿ(K)) (sign chosen so c > 0) and the
/// residual μ_i - c S_{p,i}; `rel` is its ℓ¹ norm over ‖μ‖₁.
ResidualReport residual(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg = {});

/// h₀·1 with dist(o, [h₀·1]) = 1, found by bisection on log h₀.
Vec auto_initialize(const PolyhedralCone& cone, const DirectionSet& omega);

/// Maximizes I_μ (p > 0) or φ_μ (p < 0) over support data on ω. Returns the best
/// iterate; `status` distinguishes convergence from failure modes.
SolverResult solve(const PolyhedralCone& cone, const DirectionSet& omega, const DiscreteMeasure& mu, double p,
                   const SolverConfig& cfg = {});

}  // namespace gaussmink
