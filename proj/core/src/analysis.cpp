#include "gaussmink/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gaussmink/error.hpp"
#include "gaussmink/normal.hpp"

namespace gaussmink {

namespace {

constexpr int kScanPoints = 64;
constexpr int kMaxSearchIters = 400;

void require_p_below_n(double p, int n) {
  if (!(p < static_cast<double>(n))) throw Error(ErrorKind::PGreaterEqualN, "the construction requires p < n");
  if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must be a nonzero finite number");
}

void require_unit_interval_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0, 1]");
}

void require_shared(const PseudoCone& k, const PseudoCone& l) {
  bool same = k.dim() == l.dim() && k.size() == l.size() &&
              k.cone().halfspace_normals().size() == l.cone().halfspace_normals().size();
  for (std::size_t i = 0; same && i < k.size(); ++i) same = (k.directions()[i] - l.directions()[i]).norm() <= 1e-14;
  for (std::size_t i = 0; same && i < k.cone().halfspace_normals().size(); ++i) {
    same = (k.cone().halfspace_normals()[i] - l.cone().halfspace_normals()[i]).norm() <= 1e-14;
  }
  if (!same) throw Error(ErrorKind::InvalidArgument, "K and L must share the cone and the direction set");
}

double golden_max(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kMaxSearchIters && (b - a) > rel_tol * (a + b) * 0.5; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

// Root of f(t) = level on [a, b], where f(a) - level and f(b) - level differ in sign.
double bisect_level(const std::function<double(double)>& f, double level, double a, double b, double abs_tol) {
  const bool rising = f(a) < level;
  for (int it = 0; it < kMaxSearchIters && (b - a) > abs_tol; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if ((f(mid) < level) == rising) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

MeasureEstimate volume_of(const PseudoCone& k, const EstimatorConfig& cfg) { return gaussian_volume(k, cfg); }

double rel_err(const MeasureEstimate& e) { return e.combined_error() / e.value; }

}  // namespace

MeasureEstimate psi_estimate(const PolyhedralCone& c, const Vec& v, double p, double t, const EstimatorConfig& cfg) {
  require_p_below_n(p, c.dim());
  MeasureEstimate s = section_gaussian_area(c, v, t, cfg);
  const double w = std::pow(t, 1.0 - p);
  s.value *= w;
  s.std_error *= w;
  s.error_bound *= w;
  return s;
}

double psi(const PolyhedralCone& c, const Vec& v, double p, double t, const EstimatorConfig& cfg) {
  return psi_estimate(c, v, p, t, cfg).value;
}

PseudoCone build_section_pseudocone(const PolyhedralCone& c, const Vec& v, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveSupport, "section distance must be positive");
  return PseudoCone(c, validate_directions(c, {v}, 1e-12), Vec::Constant(1, t));
}

PsiBracket default_psi_bracket(int n) { return {1e-4, truncation_radius(1e-12, n)}; }

NonUniquePair find_nonunique_pair(const PolyhedralCone& c, const Vec& v, double p, double theta, double rel_tol,
                                  const EstimatorConfig& cfg) {
  require_p_below_n(p, c.dim());
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorKind::InvalidArgument, "level fraction must lie in (0,1)");
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  validate_directions(c, {v}, 1e-12);
  const std::function<double(double)> f = [&](double t) { return psi(c, v, p, t, cfg); };

  NonUniquePair out;
  out.theta = theta;
  out.p = p;
  out.bracket = default_psi_bracket(c.dim());

  std::vector<double> ts(kScanPoints);
  std::vector<double> vals(kScanPoints);
  int best = 0;
  for (int attempt = 0;; ++attempt) {
    const double ratio = std::log(out.bracket.hi / out.bracket.lo) / (kScanPoints - 1);
    for (int j = 0; j < kScanPoints; ++j) {
      ts[j] = out.bracket.lo * std::exp(ratio * j);
      vals[j] = f(ts[j]);
    }
    best = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    const bool interior = best > 0 && best < kScanPoints - 1;
    if (interior && vals.front() < theta * vals[best] && vals.back() < theta * vals[best]) break;
    if (attempt == 1) throw Error(ErrorKind::PeakNotBracketed, "psi has no interior peak on the search bracket");
    out.bracket.lo *= 1e-2;
    out.bracket.hi *= 2.0;
  }
  int local_maxima = 0;
  for (int j = 1; j + 1 < kScanPoints; ++j) {
    if (vals[j] > vals[j - 1] && vals[j] >= vals[j + 1]) ++local_maxima;
  }
  out.multiple_maxima = local_maxima > 1;

  out.t_peak = golden_max(f, ts[best - 1], ts[best + 1], std::max(rel_tol, 1e-10));
  out.psi_peak = f(out.t_peak);
  out.psi_level = theta * out.psi_peak;
  const double abs_tol = rel_tol * out.t_peak;
  out.t1 = bisect_level(f, out.psi_level, out.bracket.lo, out.t_peak, abs_tol);
  out.t2 = bisect_level(f, out.psi_level, out.t_peak, out.bracket.hi, abs_tol);

  out.k.emplace(build_section_pseudocone(c, v, out.t1));
  out.l.emplace(build_section_pseudocone(c, v, out.t2));
  out.sp_k = sp_measure(*out.k, 0, p, cfg);
  out.sp_l = sp_measure(*out.l, 0, p, cfg);
  out.volume_k = volume_of(*out.k, cfg);
  out.volume_l = volume_of(*out.l, cfg);

  // S_p of a section shape is (2π)^{-n/2} ψ(t); what remains is the root-finder
  // miss on each side.
  const double norm = std::pow(kSqrt2Pi, -static_cast<double>(c.dim()));
  const double miss = std::abs(f(out.t1) - out.psi_level) + std::abs(f(out.t2) - out.psi_level);
  out.budget = out.sp_k.combined_error() + out.sp_l.combined_error() + norm * miss +
               8.0 * std::numeric_limits<double>::epsilon() * std::max(out.sp_k.value, out.sp_l.value);
  out.certified = out.measure_gap() <= out.budget && (out.t2 - out.t1) >= 1e-3 * out.t_peak;
  return out;
}

InequalityCheck mixed_volume_inequality_check(const PseudoCone& k, const PseudoCone& l, double p,
                                              const EstimatorConfig& cfg) {
  require_unit_interval_p(p);
  require_shared(k, l);
  const Vec hk = support_values(k).array().pow(p).matrix();
  const Vec hl = support_values(l).array().pow(p).matrix();
  const auto sp = sp_measure_vector(k, p, cfg);
  const auto vk = volume_of(k, cfg);
  const auto vl = volume_of(l, cfg);

  InequalityCheck out;
  const Vec diff = hk - hl;
  out.lhs = diff.dot(sp.values) / (p * vk.value);
  out.rhs = std::log(vl.value / vk.value);
  const double lhs_err = diff.cwiseAbs().dot(sp.combined_errors()) / (p * vk.value) + std::abs(out.lhs) * rel_err(vk);
  const double rhs_err = rel_err(vk) + rel_err(vl);
  const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(out.lhs) + std::abs(out.rhs));
  out.budget = lhs_err + rhs_err + rounding;
  out.holds = out.lhs >= out.rhs - out.budget;
  return out;
}

InequalityCheck log_concavity_chain_check(const PseudoCone& k, const PseudoCone& l, double p, double t,
                                          const EstimatorConfig& cfg) {
  require_unit_interval_p(p);
  require_shared(k, l);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "t must lie in [0, 1]");
  const Vec hk = support_values(k).array().pow(p).matrix();
  const Vec hl = support_values(l).array().pow(p).matrix();
  const Vec hm = ((1.0 - t) * hk + t * hl).array().pow(1.0 / p).matrix();
  const auto vk = volume_of(k, cfg);
  const auto vl = volume_of(l, cfg);
  const auto vm = volume_of(k.with_support(hm), cfg);

  InequalityCheck out;
  out.lhs = std::log(vm.value);
  out.rhs = (1.0 - t) * std::log(vk.value) + t * std::log(vl.value);
  const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(out.lhs) + std::abs(out.rhs));
  out.budget = rel_err(vm) + (1.0 - t) * rel_err(vk) + t * rel_err(vl) + rounding;
  out.holds = out.lhs >= out.rhs - out.budget;
  return out;
}

std::string_view to_string(Verdict v) {
  return v == Verdict::Consistent ? "CONSISTENT" : "THEOREM_VIOLATION";
}

UniquenessReport uniqueness_check(const PseudoCone& k, const PseudoCone& l, double p, const EstimatorConfig& cfg,
                                  const UniquenessTolerances& tol) {
  require_unit_interval_p(p);
  require_shared(k, l);
  const auto sk = sp_measure_vector(k, p, cfg);
  const auto sl = sp_measure_vector(l, p, cfg);
  const auto vk = volume_of(k, cfg);
  const auto vl = volume_of(l, cfg);

  UniquenessReport out;
  out.measure_distance = (sk.values - sl.values).lpNorm<1>();
  out.measure_budget = tol.measure + sk.combined_errors().sum() + sl.combined_errors().sum();
  out.volume_difference = vk.value - vl.value;
  out.volume_budget = tol.volume + 3.0 * std::hypot(vk.combined_error(), vl.combined_error());
  out.support_distance = (support_values(k) - support_values(l)).lpNorm<Eigen::Infinity>();
  out.measures_equal = out.measure_distance <= out.measure_budget;
  out.volumes_equal = std::abs(out.volume_difference) <= out.volume_budget;
  out.verdict = out.measures_equal && out.volumes_equal && out.support_distance > tol.support ? Verdict::TheoremViolation
                                                                                               : Verdict::Consistent;
  return out;
}

}  // namespace gaussmink
