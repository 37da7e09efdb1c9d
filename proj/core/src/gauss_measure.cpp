#include "gaussmink/gauss_measure.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "gaussmink/error.hpp"
#include "gaussmink/normal.hpp"
#include "gaussmink/rng.hpp"

namespace gaussmink {

namespace {

constexpr int kMaxQuadratureSteps = 1 << 21;

// Constraint t*at + s*as <= b in (axis, normal-to-axis) coordinates.
struct SectionLine {
  double at;
  double as;
  double b;
};

class PlanarSections {
 public:
  PlanarSections(const Polyhedron& region, const Vec& axis) {
    const Eigen::Vector2d t_dir = axis.head<2>().normalized();
    const Eigen::Vector2d s_dir(-t_dir.y(), t_dir.x());
    for (const auto& c : region.constraints) {
      const Eigen::Vector2d a(c.normal[0], c.normal[1]);
      lines_.push_back({a.dot(t_dir), a.dot(s_dir), c.offset});
    }
  }

  // Which constraints bound the section on a panel, read off at an interior
  // point. Sections can jump where a constraint is orthogonal to the axis, so
  // panel endpoints must be evaluated as one-sided limits through this.
  struct Active {
    int lo = -1;
    int hi = -1;
    bool empty = false;
  };

  Active active_at(double t) const {
    Active a;
    double lo = -kInf;
    double hi = kInf;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      const auto& l = lines_[i];
      if (std::abs(l.as) < 1e-15) {
        if (t * l.at > l.b) a.empty = true;
        continue;
      }
      const double bound = (l.b - t * l.at) / l.as;
      if (l.as > 0.0 && bound < hi) {
        hi = bound;
        a.hi = static_cast<int>(i);
      } else if (l.as < 0.0 && bound > lo) {
        lo = bound;
        a.lo = static_cast<int>(i);
      }
    }
    return a;
  }

  double mass(const Active& a, double t) const {
    if (a.empty) return 0.0;
    const double lo = a.lo < 0 ? -kInf : bound(a.lo, t);
    const double hi = a.hi < 0 ? kInf : bound(a.hi, t);
    return normal_interval_mass(lo, hi);
  }

  // Axis coordinates where the section endpoints can kink.
  std::vector<double> breakpoints(double t_max) const {
    std::vector<double> out{0.0, t_max};
    const std::size_t m = lines_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(lines_[i].as) < 1e-15 && std::abs(lines_[i].at) > 1e-15) {
        out.push_back(lines_[i].b / lines_[i].at);
      }
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto& p = lines_[i];
        const auto& q = lines_[j];
        const double det = p.at * q.as - p.as * q.at;
        if (std::abs(det) < 1e-14) continue;
        out.push_back((p.b * q.as - p.as * q.b) / det);
      }
    }
    std::vector<double> kept;
    for (double t : out) {
      if (std::isfinite(t) && t >= 0.0 && t <= t_max) kept.push_back(t);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<double> uniq;
    for (double t : kept) {
      if (uniq.empty() || t - uniq.back() > 1e-13) uniq.push_back(t);
    }
    return uniq;
  }

 private:
  double bound(int i, double t) const {
    const auto& l = lines_[static_cast<std::size_t>(i)];
    return (l.b - t * l.at) / l.as;
  }

  std::vector<SectionLine> lines_;
};

double composite_simpson(const PlanarSections& sec, const std::vector<double>& knots, int total_steps) {
  const double span = knots.back() - knots.front();
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    const auto active = sec.active_at(0.5 * (a + b));
    auto f = [&](double t) { return std_normal_pdf(t) * sec.mass(active, t); };
    int steps = 2 * static_cast<int>(std::ceil(0.5 * total_steps * (b - a) / span));
    steps = std::max(steps, 2);
    const double h = (b - a) / steps;
    double panel = f(a) + f(b);
    for (int j = 1; j < steps; ++j) panel += (j % 2 == 1 ? 4.0 : 2.0) * f(a + j * h);
    sum += panel * h / 3.0;
  }
  return sum;
}

MeasureEstimate exact_1d(const Polyhedron& region) {
  const Interval iv = interval_of(region);
  MeasureEstimate out;
  out.value = normal_interval_mass(iv.lo, iv.hi);
  out.error_bound = 4.0 * DBL_EPSILON;
  out.method = Method::Exact1d;
  out.samples_or_steps = 1;
  return out;
}

MeasureEstimate hit_fraction(std::uint64_t hits, const EstimatorConfig& cfg) {
  MeasureEstimate out;
  const double n = static_cast<double>(cfg.n_samples);
  out.value = static_cast<double>(hits) / n;
  out.std_error = std::sqrt(out.value * (1.0 - out.value) / n);
  out.method = Method::MonteCarlo;
  out.samples_or_steps = cfg.n_samples;
  out.seed = cfg.seed;
  return out;
}

template <typename Pred>
MeasureEstimate monte_carlo(int dim, const EstimatorConfig& cfg, std::uint32_t tag, Pred&& inside) {
  const SampleStream stream(cfg.seed, tag);
  const auto sums = reduce_chunks(static_cast<std::uint64_t>(cfg.n_samples), cfg.workers,
                                  [&](std::uint64_t begin, std::uint64_t end) {
                                    ChunkSums s;
                                    Vec x(dim);
                                    for (std::uint64_t i = begin; i < end; ++i) {
                                      stream.normal_vector(i, x);
                                      if (inside(x)) ++s.hits;
                                    }
                                    return s;
                                  });
  return hit_fraction(sums.hits, cfg);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::MonteCarlo: return "monte_carlo";
    case Method::Quadrature2d: return "quadrature_2d";
    case Method::Exact1d: return "exact_1d";
  }
  return "unknown";
}

void EstimatorConfig::validate() const {
  if (n_samples < 10000) throw Error(ErrorKind::InvalidArgument, "n_samples must be at least 10^4");
  if (quadrature_steps < 64) throw Error(ErrorKind::InvalidArgument, "quadrature_steps must be at least 64");
  if (!(target_abs_error > 0.0)) throw Error(ErrorKind::InvalidArgument, "target_abs_error must be positive");
}

bool EstimatorConfig::deterministic_for(int dim) const {
  switch (path) {
    case EstimatorPath::MonteCarlo: return false;
    case EstimatorPath::Deterministic:
      if (dim > 2) {
        throw Error(ErrorKind::DimensionUnsupported, "deterministic quadrature is only available for n <= 2");
      }
      return true;
    case EstimatorPath::Auto: return dim <= 2;
  }
  return false;
}

double MeasureEstimate::combined_error() const { return std::hypot(std_error, error_bound); }

MeasureEstimate planar_gaussian_volume(const Polyhedron& region, const Vec& axis, const EstimatorConfig& cfg) {
  cfg.validate();
  const PlanarSections sec(region, axis);
  const double trunc_eps = 0.1 * cfg.target_abs_error;
  const double t_max = truncation_radius(trunc_eps, 2);
  const auto knots = sec.breakpoints(t_max);

  int steps = cfg.quadrature_steps;
  double coarse = composite_simpson(sec, knots, steps);
  double fine = composite_simpson(sec, knots, 2 * steps);
  double err = std::abs(fine - coarse) / 15.0;
  while (err > 0.5 * cfg.target_abs_error && 2 * steps < kMaxQuadratureSteps) {
    steps *= 2;
    coarse = fine;
    fine = composite_simpson(sec, knots, 2 * steps);
    err = std::abs(fine - coarse) / 15.0;
  }
  MeasureEstimate out;
  out.value = std::clamp(fine + (fine - coarse) / 15.0, 0.0, 1.0);
  out.error_bound = err + trunc_eps + 8.0 * DBL_EPSILON * std::abs(out.value);
  out.method = Method::Quadrature2d;
  out.samples_or_steps = 2 * steps;
  return out;
}

MeasureEstimate gaussian_volume(const PseudoCone& k, const EstimatorConfig& cfg) {
  cfg.validate();
  const int n = k.dim();
  if (cfg.deterministic_for(n)) {
    if (n == 1) return exact_1d(k.as_polyhedron());
    return planar_gaussian_volume(k.as_polyhedron(), k.cone().ref_dir(), cfg);
  }
  const auto& poly = k.as_polyhedron();
  return monte_carlo(n, cfg, stream_tag::kVolume, [&](const Vec& x) { return poly.contains(x, 0.0); });
}

MeasureEstimate gaussian_volume(const PolyhedralCone& c, const EstimatorConfig& cfg) {
  cfg.validate();
  const int n = c.dim();
  if (cfg.deterministic_for(n)) {
    if (n == 1) return exact_1d(c.as_polyhedron());
    return planar_gaussian_volume(c.as_polyhedron(), c.ref_dir(), cfg);
  }
  return monte_carlo(n, cfg, stream_tag::kVolume, [&](const Vec& x) { return c.contains(x, 0.0); });
}

MeasureEstimate gaussian_measure_polyhedron(const Polyhedron& region, const EstimatorConfig& cfg) {
  if (region.dim == 0) {
    MeasureEstimate out;
    const bool ok = std::all_of(region.constraints.begin(), region.constraints.end(),
                                [](const Halfspace& c) { return c.offset >= -kMembershipTol; });
    out.value = ok ? 1.0 : 0.0;
    out.method = Method::Exact1d;
    out.samples_or_steps = 1;
    return out;
  }
  if (region.dim == 1) return exact_1d(region);
  cfg.validate();
  return monte_carlo(region.dim, cfg, stream_tag::kFacet, [&](const Vec& y) { return region.contains(y, 0.0); });
}

double tail_bound(double r, int n) {
  if (!(r > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "radius must be positive");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 1");
  const double nn = static_cast<double>(n);
  return 2.0 * nn * std::sqrt(nn) / (kSqrt2Pi * r) * std::exp(-r * r / (2.0 * nn));
}

double truncation_radius(double eps, int n) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "truncation level must lie in (0,1)");
  // tail_bound is strictly decreasing in r, so bisection on a bracket is exact.
  double lo = 1e-6;
  double hi = 1.0;
  while (tail_bound(hi, n) > eps) {
    lo = hi;
    hi *= 2.0;
  }
  while ((hi - lo) > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (tail_bound(mid, n) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MeasureEstimate covolume(const PseudoCone& k, const EstimatorConfig& cfg) {
  cfg.validate();
  const int n = k.dim();
  if (cfg.deterministic_for(n)) {
    const auto whole = gaussian_volume(k.cone(), cfg);
    const auto part = gaussian_volume(k, cfg);
    MeasureEstimate out = part;
    out.value = whole.value - part.value;
    out.error_bound = whole.error_bound + part.error_bound;
    return out;
  }
  const auto& poly = k.as_polyhedron();
  const auto& c = k.cone();
  return monte_carlo(n, cfg, stream_tag::kVolume,
                     [&](const Vec& x) { return c.contains(x, 0.0) && !poly.contains(x, 0.0); });
}

MeasureEstimate ball_complement_mc(double r, int n, const EstimatorConfig& cfg) {
  if (!(r > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "radius must be positive");
  cfg.validate();
  const double r2 = r * r;
  return monte_carlo(n, cfg, stream_tag::kBall, [&](const Vec& x) { return x.squaredNorm() > r2; });
}

}  // namespace gaussmink
