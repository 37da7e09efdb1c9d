#include "gaussmink/surface_measure.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "gaussmink/error.hpp"
#include "gaussmink/normal.hpp"
#include "gaussmink/rng.hpp"

namespace gaussmink {

namespace {

constexpr int kMaxAngularSteps = 1 << 20;

MeasureEstimate scaled(MeasureEstimate e, double factor) {
  e.value *= factor;
  e.std_error *= std::abs(factor);
  e.error_bound *= std::abs(factor);
  return e;
}

struct PlanarArc {
  Eigen::Vector2d axis;
  Eigen::Vector2d ortho;
  double lo = 0.0;
  double hi = 0.0;

  Vec at(double theta) const {
    Vec v(2);
    v << std::cos(theta) * axis + std::sin(theta) * ortho;
    return v;
  }
};

// Ω_C for a planar cone as an angular interval measured from 𝔳.
PlanarArc planar_arc(const PolyhedralCone& c) {
  PlanarArc arc;
  arc.axis = c.ref_dir().head<2>();
  arc.ortho = Eigen::Vector2d(-arc.axis.y(), arc.axis.x());
  std::vector<double> angles;
  for (const auto& a : c.halfspace_normals()) {
    Eigen::Vector2d e(-a[1], a[0]);
    if (e.dot(arc.axis) < 0.0) e = -e;
    angles.push_back(std::atan2(e.dot(arc.ortho), e.dot(arc.axis)));
  }
  arc.lo = *std::min_element(angles.begin(), angles.end());
  arc.hi = *std::max_element(angles.begin(), angles.end());
  return arc;
}

// Angles in (lo, hi) where the radial argmax can switch between two facets.
std::vector<double> switch_knots(const PseudoCone& k, const PlanarArc& arc) {
  std::vector<double> knots{arc.lo, arc.hi};
  const auto& h = k.support();
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      const Vec d = h[static_cast<Eigen::Index>(j)] * k.directions()[i] - h[static_cast<Eigen::Index>(i)] * k.directions()[j];
      const Eigen::Vector2d d2 = d.head<2>();
      const double theta0 = std::atan2(-d2.dot(arc.axis), d2.dot(arc.ortho));
      for (double theta : {theta0 - kPi, theta0, theta0 + kPi}) {
        if (theta > arc.lo && theta < arc.hi) knots.push_back(theta);
      }
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(), [](double a, double b) { return b - a <= 1e-15; }), knots.end());
  return knots;
}

struct Panel {
  double a;
  double b;
  std::size_t active;
};

Vec simpson_by_facet(const PseudoCone& k, const BoundaryWeight& f, const PlanarArc& arc,
                     const std::vector<Panel>& panels, int total_steps) {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(k.size()));
  const double span = arc.hi - arc.lo;
  for (const auto& p : panels) {
    const Vec& u = k.directions()[p.active];
    const double h = k.support()[static_cast<Eigen::Index>(p.active)];
    auto g = [&](double theta) {
      const Vec v = arc.at(theta);
      const double cosine = -v.dot(u);
      const double rho = h / cosine;
      return f(rho * v, u) * rho / cosine;
    };
    int steps = 2 * static_cast<int>(std::ceil(0.5 * total_steps * (p.b - p.a) / span));
    steps = std::max(steps, 2);
    const double dt = (p.b - p.a) / steps;
    double sum = g(p.a) + g(p.b);
    for (int j = 1; j < steps; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * g(p.a + j * dt);
    out[static_cast<Eigen::Index>(p.active)] += sum * dt / 3.0;
  }
  return out;
}

std::vector<MeasureEstimate> radial_planar(const PseudoCone& k, const BoundaryWeight& f, const EstimatorConfig& cfg) {
  const PlanarArc arc = planar_arc(k.cone());
  const auto knots = switch_knots(k, arc);
  std::vector<Panel> panels;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double mid = 0.5 * (knots[s] + knots[s + 1]);
    panels.push_back({knots[s], knots[s + 1], radial_function(k, arc.at(mid)).active});
  }
  int steps = cfg.quadrature_steps;
  Vec coarse = simpson_by_facet(k, f, arc, panels, steps);
  Vec fine = simpson_by_facet(k, f, arc, panels, 2 * steps);
  // The extrapolated value is reported with the full level difference as its
  // bound; the usual /15 estimate is optimistic when panels are wide.
  Vec err = (fine - coarse).cwiseAbs();
  while (err.maxCoeff() > 0.5 * cfg.target_abs_error && 2 * steps < kMaxAngularSteps) {
    steps *= 2;
    coarse = fine;
    fine = simpson_by_facet(k, f, arc, panels, 2 * steps);
    err = (fine - coarse).cwiseAbs();
  }
  std::vector<MeasureEstimate> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out[i].value = fine[ii] + (fine[ii] - coarse[ii]) / 15.0;
    // Worst-case summation roundoff grows with the number of nodes.
    const double nodes = 2.0 * steps * static_cast<double>(panels.size()) + 1.0;
    out[i].error_bound = err[ii] + nodes * DBL_EPSILON * std::abs(out[i].value);
    out[i].method = Method::Quadrature2d;
    out[i].samples_or_steps = 2 * steps;
  }
  return out;
}

std::vector<MeasureEstimate> radial_spatial_mc(const PseudoCone& k, const BoundaryWeight& f,
                                               const EstimatorConfig& cfg) {
  cfg.validate();
  const SampleStream stream(cfg.seed, stream_tag::kSphere);
  const double sphere_area = 4.0 * kPi;
  const double n = static_cast<double>(cfg.n_samples);
  std::vector<MeasureEstimate> out(k.size());
  for (std::size_t target = 0; target < k.size(); ++target) {
    const auto sums = reduce_chunks(static_cast<std::uint64_t>(cfg.n_samples), cfg.workers,
                                    [&](std::uint64_t begin, std::uint64_t end) {
                                      ChunkSums s;
                                      Vec z(3);
                                      for (std::uint64_t idx = begin; idx < end; ++idx) {
                                        stream.normal_vector(idx, z);
                                        const Vec v = z.normalized();
                                        if (!k.cone().contains_interior(v, 0.0)) continue;
                                        const auto rp = radial_function(k, v);
                                        if (rp.active != target) continue;
                                        const Vec& u = k.directions()[rp.active];
                                        const double val = f(rp.rho * v, u) * rp.rho * rp.rho / std::abs(v.dot(u));
                                        s.sum += val;
                                        s.sum_sq += val * val;
                                      }
                                      return s;
                                    });
    const double mean = sums.sum / n;
    const double var = std::max(0.0, sums.sum_sq / n - mean * mean);
    out[target].value = sphere_area * mean;
    out[target].std_error = sphere_area * std::sqrt(var / n);
    out[target].method = Method::MonteCarlo;
    out[target].samples_or_steps = cfg.n_samples;
    out[target].seed = cfg.seed;
  }
  return out;
}

}  // namespace

Vec SurfaceMeasureVector::combined_errors() const {
  Vec out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = std::hypot(std_errors[i], error_bounds[i]);
  return out;
}

MeasureEstimate facet_gaussian_area(const PseudoCone& k, std::size_t i, const EstimatorConfig& cfg) {
  const FacetRegion& facet = facet_region(k, i);
  MeasureEstimate out;
  if (facet.empty()) {
    out.method = Method::Exact1d;
    return out;
  }
  const double h = k.support()[static_cast<Eigen::Index>(i)];
  return scaled(gaussian_measure_polyhedron(facet.region, cfg), std_normal_pdf(h));
}

MeasureEstimate sp_measure(const PseudoCone& k, std::size_t i, double p, const EstimatorConfig& cfg) {
  const double h = k.support()[static_cast<Eigen::Index>(facet_region(k, i).index)];
  return scaled(facet_gaussian_area(k, i, cfg), std::pow(h, 1.0 - p));
}

SurfaceMeasureVector sp_measure_vector(const PseudoCone& k, double p, const EstimatorConfig& cfg) {
  SurfaceMeasureVector out;
  const auto m = static_cast<Eigen::Index>(k.size());
  out.values.resize(m);
  out.std_errors.resize(m);
  out.error_bounds.resize(m);
  out.p = p;
  out.method = Method::Exact1d;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto e = sp_measure(k, i, p, cfg);
    const auto ii = static_cast<Eigen::Index>(i);
    out.values[ii] = e.value;
    out.std_errors[ii] = e.std_error;
    out.error_bounds[ii] = e.error_bound;
    if (e.method == Method::MonteCarlo) out.method = Method::MonteCarlo;
  }
  return out;
}

BoundaryWeight gaussian_surface_density(double p) {
  return [p](const Vec& x, const Vec& normal) {
    const double n = static_cast<double>(x.size());
    return std::pow(kSqrt2Pi, -n) * std::pow(std::abs(x.dot(normal)), 1.0 - p) * std::exp(-0.5 * x.squaredNorm());
  };
}

std::vector<MeasureEstimate> radial_transform_facets(const PseudoCone& k, const BoundaryWeight& f,
                                                     const EstimatorConfig& cfg) {
  if (k.dim() == 2) return radial_planar(k, f, cfg);
  if (k.dim() == 3) return radial_spatial_mc(k, f, cfg);
  throw Error(ErrorKind::DimensionUnsupported, "the radial transform is implemented for n = 2 and n = 3");
}

MeasureEstimate radial_transform_integral(const PseudoCone& k, const BoundaryWeight& f, const EstimatorConfig& cfg) {
  const auto parts = radial_transform_facets(k, f, cfg);
  MeasureEstimate out = parts.front();
  out.value = 0.0;
  double var = 0.0;
  double bound = 0.0;
  for (const auto& e : parts) {
    out.value += e.value;
    var += e.std_error * e.std_error;
    bound += e.error_bound;
  }
  // Per-facet MC estimates share one sample stream, so adding their std errors
  // linearly is the conservative choice.
  double se = 0.0;
  for (const auto& e : parts) se += e.std_error;
  out.std_error = parts.front().method == Method::MonteCarlo ? se : std::sqrt(var);
  out.error_bound = bound;
  return out;
}

MeasureEstimate section_gaussian_area(const PolyhedralCone& c, const Vec& v, double t, const EstimatorConfig& cfg) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "section distance must be positive");
  const auto omega = validate_directions(c, {v}, 1e-12);
  const PseudoCone k(c, omega, Vec::Constant(1, t));
  const auto& facet = k.facet(0);
  if (facet.empty()) return MeasureEstimate{};
  const double n = static_cast<double>(c.dim());
  return scaled(gaussian_measure_polyhedron(facet.region, cfg), std::pow(kSqrt2Pi, n - 1.0) * std::exp(-0.5 * t * t));
}

}  // namespace gaussmink
