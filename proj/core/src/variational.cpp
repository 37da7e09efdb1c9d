#include "gaussmink/variational.hpp"

#include <algorithm>
#include <cmath>

#include "gaussmink/error.hpp"
#include "gaussmink/rng.hpp"

namespace gaussmink {

namespace {

void require_nonzero(double p) {
  if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must be a nonzero finite number");
}

void require_sizes(const PseudoCone& k, const DiscreteMeasure& mu) {
  if (mu.size() != k.size()) throw Error(ErrorKind::DimensionMismatch, "measure and direction set differ in size");
}

// Signed difference 1[x ∈ A] - 1[x ∈ B] sampled on one stream.
MeasureEstimate paired_mc(const Polyhedron& a, const Polyhedron& b, int dim, const EstimatorConfig& cfg) {
  const SampleStream stream(cfg.seed, stream_tag::kVolume);
  const auto sums = reduce_chunks(static_cast<std::uint64_t>(cfg.n_samples), cfg.workers,
                                  [&](std::uint64_t begin, std::uint64_t end) {
                                    ChunkSums s;
                                    Vec x(dim);
                                    for (std::uint64_t i = begin; i < end; ++i) {
                                      stream.normal_vector(i, x);
                                      const double d = (a.contains(x, 0.0) ? 1.0 : 0.0) - (b.contains(x, 0.0) ? 1.0 : 0.0);
                                      s.sum += d;
                                      s.sum_sq += d * d;
                                    }
                                    return s;
                                  });
  const double n = static_cast<double>(cfg.n_samples);
  MeasureEstimate out;
  out.value = sums.sum / n;
  out.std_error = std::sqrt(std::max(0.0, sums.sum_sq / n - out.value * out.value) / n);
  out.method = Method::MonteCarlo;
  out.samples_or_steps = cfg.n_samples;
  out.seed = cfg.seed;
  return out;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Vec weights) : w_(std::move(weights)) {
  if (w_.size() == 0) throw Error(ErrorKind::EmptyInput, "measure has no weights");
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
      throw Error(ErrorKind::InvalidArgument, "measure weights must be positive and finite", {static_cast<std::size_t>(i)});
    }
  }
}

GCoordinates GCoordinates::from_support(const Vec& h, double p) {
  require_nonzero(p);
  return {h.array().pow(p).matrix(), p};
}

Vec GCoordinates::to_support() const { return g.array().pow(1.0 / p).matrix(); }

double moment(const Vec& h, const DiscreteMeasure& mu, double p) {
  return h.array().pow(p).matrix().dot(mu.weights());
}

MeasureEstimate functional_I(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "functional_I requires p > 0");
  require_sizes(k, mu);
  const double m = moment(k.support(), mu, p);
  MeasureEstimate out = gaussian_volume(k, cfg);
  out.value *= m;
  out.std_error *= m;
  out.error_bound *= m;
  return out;
}

MeasureEstimate functional_phi(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg) {
  if (!(p < 0.0)) throw Error(ErrorKind::InvalidArgument, "functional_phi requires p < 0");
  require_sizes(k, mu);
  const double m = moment(k.support(), mu, p);
  MeasureEstimate out = gaussian_volume(k, cfg);
  out.value /= m;
  out.std_error /= m;
  out.error_bound /= m;
  return out;
}

VectorEstimate grad_volume_in_g(const PseudoCone& k, double p, const EstimatorConfig& cfg) {
  require_nonzero(p);
  const auto sp = sp_measure_vector(k, p, cfg);
  return {-sp.values / p, sp.combined_errors() / std::abs(p)};
}

VectorEstimate grad_I_in_g(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg) {
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "grad_I_in_g requires p > 0");
  require_sizes(k, mu);
  const double m = moment(k.support(), mu, p);
  const auto vol = gaussian_volume(k, cfg);
  const auto dv = grad_volume_in_g(k, p, cfg);
  return {dv.value * m + vol.value * mu.weights(), dv.error * m + vol.combined_error() * mu.weights()};
}

VectorEstimate grad_phi_in_g(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg) {
  if (!(p < 0.0)) throw Error(ErrorKind::InvalidArgument, "grad_phi_in_g requires p < 0");
  require_sizes(k, mu);
  const double m = moment(k.support(), mu, p);
  const auto vol = gaussian_volume(k, cfg);
  const auto dv = grad_volume_in_g(k, p, cfg);
  const double m2 = m * m;
  return {(dv.value * m - vol.value * mu.weights()) / m2, (dv.error * m + vol.combined_error() * mu.weights()) / m2};
}

double default_fd_step(const PseudoCone& k, double p) {
  require_nonzero(p);
  return 1e-4 * k.support().array().pow(p).minCoeff();
}

PseudoCone perturbed(const PseudoCone& k, const Vec& f, double p, double t) {
  require_nonzero(p);
  if (f.size() != k.support().size()) throw Error(ErrorKind::DimensionMismatch, "perturbation has wrong length");
  const Vec g = k.support().array().pow(p).matrix() + t * f;
  if ((g.array() <= 0.0).any()) throw Error(ErrorKind::StepTooLarge, "h^p + t f must stay positive");
  return k.with_support(g.array().pow(1.0 / p).matrix());
}

MeasureEstimate fd_volume_derivative(const PseudoCone& k, const Vec& f, double p, double step,
                                     const EstimatorConfig& cfg) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const PseudoCone plus = perturbed(k, f, p, step);
  const PseudoCone minus = perturbed(k, f, p, -step);
  cfg.validate();
  MeasureEstimate diff;
  if (cfg.deterministic_for(k.dim())) {
    const auto a = gaussian_volume(plus, cfg);
    const auto b = gaussian_volume(minus, cfg);
    diff = a;
    diff.value = a.value - b.value;
    diff.error_bound = a.error_bound + b.error_bound;
  } else {
    diff = paired_mc(plus.as_polyhedron(), minus.as_polyhedron(), k.dim(), cfg);
  }
  diff.value /= 2.0 * step;
  diff.std_error /= 2.0 * step;
  diff.error_bound /= 2.0 * step;
  return diff;
}

MeasureEstimate fd_covolume_derivative(const PseudoCone& k, const Vec& f, double p, double step,
                                       const EstimatorConfig& cfg) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const PseudoCone plus = perturbed(k, f, p, step);
  const PseudoCone minus = perturbed(k, f, p, -step);
  cfg.validate();
  MeasureEstimate diff;
  if (cfg.deterministic_for(k.dim())) {
    const auto a = covolume(plus, cfg);
    const auto b = covolume(minus, cfg);
    diff = a;
    diff.value = a.value - b.value;
    diff.error_bound = a.error_bound + b.error_bound;
  } else {
    // C \ K+ minus C \ K- is K- minus K+ on the cone.
    diff = paired_mc(minus.as_polyhedron(), plus.as_polyhedron(), k.dim(), cfg);
  }
  diff.value /= 2.0 * step;
  diff.std_error /= 2.0 * step;
  diff.error_bound /= 2.0 * step;
  return diff;
}

RadialDerivative radial_derivative_check(const PseudoCone& k, const Vec& f, const Vec& v, double p, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const auto base = radial_function(k, v);
  const auto hi = radial_function(perturbed(k, f, p, step), v);
  const auto lo = radial_function(perturbed(k, f, p, -step), v);
  if (hi.active != base.active || lo.active != base.active) {
    throw Error(ErrorKind::SwitchPointTooClose, "the active facet changes within the difference stencil",
                {base.active});
  }
  const auto a = static_cast<Eigen::Index>(base.active);
  RadialDerivative out;
  out.fd = (hi.rho - lo.rho) / (2.0 * step);
  out.analytic = f[a] * base.rho / (p * std::pow(k.support()[a], p));
  return out;
}

}  // namespace gaussmink
