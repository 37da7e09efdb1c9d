#pragma once

#include <optional>
#include <string_view>

#include "gaussmink/variational.hpp"

namespace gaussmink {

/// ψ(t) = t^{1-p} s(t), with s the unnormalized Gaussian section area of C at
/// level <x, v> = -t. Throws PGreaterEqualN if p >= n.
MeasureEstimate psi_estimate(const PolyhedralCone& c, const Vec& v, double p, double t, const EstimatorConfig& cfg = {});
double psi(const PolyhedralCone& c, const Vec& v, double p, double t, const EstimatorConfig& cfg = {});

/// C ∩ {<x, v> <= -t}: the Wulff shape with ω = {v}, h = (t).
PseudoCone build_section_pseudocone(const PolyhedralCone& c, const Vec& v, double t);

/// Bracket used for the ψ search: [1e-4, truncation_radius(1e-12, n)].
struct PsiBracket {
  double lo = 1e-4;
  double hi = 0.0;
};
PsiBracket default_psi_bracket(int n);

/// Two distinct single-direction Wulff shapes K = C ∩ {<x,v> <= -t1} and
/// L = C ∩ {<x,v> <= -t2} with equal L_p Gaussian surface area measure.
struct NonUniquePair {
  double t1 = 0.0;
  double t2 = 0.0;
  double t_peak = 0.0;
  double psi_peak = 0.0;
  double psi_level = 0.0;
  double theta = 0.5;
  double p = 1.0;
  PsiBracket bracket;
  std::optional<PseudoCone> k;
  std::optional<PseudoCone> l;
  MeasureEstimate sp_k;
  MeasureEstimate sp_l;
  MeasureEstimate volume_k;
  MeasureEstimate volume_l;
  double budget = 0.0;        // allowed |S_p(K) - S_p(L)|
  bool certified = false;     // measures agree within budget and t1, t2 are separated
  bool multiple_maxima = false;  // the coarse scan saw more than one local maximum

  double measure_gap() const { return std::abs(sp_k.value - sp_l.value); }
};

/// Scan ψ on a geometric grid, refine the peak by golden section, then bisect
/// ψ = θ ψ(t_peak) on each side. `rel_tol` is the relative precision of all three
/// searches. Throws PGreaterEqualN, InvalidArgument (θ outside (0,1)) or
/// PeakNotBracketed (after one retry on an enlarged bracket).
NonUniquePair find_nonunique_pair(const PolyhedralCone& c, const Vec& v, double p, double theta = 0.5,
                                  double rel_tol = 1e-13, const EstimatorConfig& cfg = {});

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double budget = 0.0;
  bool holds = false;

  double gap() const { return lhs - rhs; }
  bool near_equality() const { return std::abs(lhs - rhs) <= budget; }
};

/// (1/(p γⁿ(K))) Σ_i (h̄_K(u_i)^p - h̄_L(u_i)^p) S_{p,i}(K) >= log(γⁿ(L)/γⁿ(K)) for
/// 0 < p <= 1. K and L must share (C, ω). `holds` allows the error budget.
InequalityCheck mixed_volume_inequality_check(const PseudoCone& k, const PseudoCone& l, double p,
                                              const EstimatorConfig& cfg = {});

/// log γⁿ([((1-t) h̄_K^p + t h̄_L^p)^{1/p}]) >= (1-t) log γⁿ(K) + t log γⁿ(L).
InequalityCheck log_concavity_chain_check(const PseudoCone& k, const PseudoCone& l, double p, double t,
                                          const EstimatorConfig& cfg = {});

enum class Verdict { Consistent, TheoremViolation };
std::string_view to_string(Verdict v);

struct UniquenessTolerances {
  double measure = 1e-9;
  double volume = 1e-9;
  double support = 1e-6;
};

struct UniquenessReport {
  double measure_distance = 0.0;  // ‖S_p(K) - S_p(L)‖₁
  double measure_budget = 0.0;
  double volume_difference = 0.0;  // γⁿ(K) - γⁿ(L)
  double volume_budget = 0.0;
  double support_distance = 0.0;  // ‖h̄_K - h̄_L‖_∞
  bool measures_equal = false;
  bool volumes_equal = false;
  Verdict verdict = Verdict::Consistent;
};

/// Equal L_p Gaussian surface area measures and equal Gaussian volumes force
/// K = L for 0 < p <= 1. Reports TheoremViolation if both premises hold within
/// tolerance while the support values differ.
UniquenessReport uniqueness_check(const PseudoCone& k, const PseudoCone& l, double p, const EstimatorConfig& cfg = {},
                                  const UniquenessTolerances& tol = {});

}  // namespace gaussmink
