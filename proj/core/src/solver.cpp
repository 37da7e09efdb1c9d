#include "gaussmink/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaussmink/error.hpp"

namespace gaussmink {

namespace {

constexpr double kMinDistance = 1e-8;
constexpr double kMaxDistance = 1e3;
constexpr double kMaxLogStep = 1.0;  // per-iteration cap on |Δ log g|_∞
constexpr int kEmptyPatience = 10;
constexpr int kMaxStalls = 5;  // consecutive failed line searches on the Monte Carlo path

// Everything the ascent needs at one point y = log g.
struct Point {
  Vec y;
  Vec h;
  std::optional<PseudoCone> k;
  double volume = 0.0;
  double volume_err = 0.0;
  SurfaceMeasureVector sp;
  double moment = 0.0;
  double objective = -std::numeric_limits<double>::infinity();  // log I or log φ
  Vec grad;                                                    // ∂objective/∂y
};

class Ascent {
 public:
  Ascent(const PolyhedralCone& cone, const DirectionSet& omega, const DiscreteMeasure& mu, double p,
         const SolverConfig& cfg)
      : cone_(cone), omega_(omega), mu_(mu), p_(p), sign_(p > 0.0 ? 1.0 : -1.0), cfg_(cfg) {}

  // Objective only; cheap enough for line-search trials.
  Point probe(const Vec& y, const EstimatorConfig& est) const {
    Point pt;
    pt.y = y;
    pt.h = (y / p_).array().exp().matrix();
    pt.k.emplace(cone_, omega_, pt.h);
    const auto vol = gaussian_volume(*pt.k, est);
    pt.volume = vol.value;
    pt.volume_err = vol.combined_error();
    pt.moment = y.array().exp().matrix().dot(mu_.weights());
    pt.objective = pt.volume > 0.0 ? std::log(pt.volume) + sign_ * std::log(pt.moment)
                                   : -std::numeric_limits<double>::infinity();
    return pt;
  }

  void complete(Point& pt, const EstimatorConfig& est) const {
    pt.sp = sp_measure_vector(*pt.k, p_, est);
    const Vec g = pt.y.array().exp().matrix();
    // ∂/∂g_i [log γ + s log Σgμ] = -S_i/(pγ) + s μ_i / Σgμ, then chain rule to log g.
    const Vec dg = -pt.sp.values / (p_ * pt.volume) + sign_ * mu_.weights() / pt.moment;
    pt.grad = g.cwiseProduct(dg);
  }

  double functional(const Point& pt) const {
    return sign_ > 0.0 ? pt.volume * pt.moment : pt.volume / pt.moment;
  }

  ResidualReport report(const Point& pt) const {
    ResidualReport r;
    r.c = sign_ * pt.moment / (p_ * pt.volume);
    r.residual = mu_.weights() - r.c * pt.sp.values;
    r.rel = r.residual.lpNorm<1>() / mu_.total();
    const Vec sp_err = pt.sp.std_errors;
    const double dc = r.c * pt.volume_err / pt.volume;
    double sigma = 0.0;
    for (Eigen::Index i = 0; i < sp_err.size(); ++i) sigma += std::hypot(pt.sp.values[i] * dc, r.c * sp_err[i]);
    r.rel_sigma = pt.sp.method == Method::MonteCarlo ? sigma / mu_.total() : 0.0;
    return r;
  }

  // Raising the support value of a direction whose facet is empty up to the
  // touching value leaves K unchanged and increases the objective in both
  // p-branches; returns true if anything moved.
  bool snap_empty(Point& pt) const {
    const auto empties = pt.k->empty_facets();
    if (empties.empty()) return false;
    const Vec hbar = support_values(*pt.k);
    bool moved = false;
    for (auto i : empties) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (hbar[ii] > pt.h[ii] * (1.0 + 1e-12)) {
        pt.y[ii] = p_ * std::log(hbar[ii]);
        moved = true;
      }
    }
    return moved;
  }

  Vec clamp(Vec y) const {
    const double floor = std::log(cfg_.g_floor);
    return y.cwiseMax(floor);
  }

 private:
  const PolyhedralCone& cone_;
  const DirectionSet& omega_;
  const DiscreteMeasure& mu_;
  double p_;
  double sign_;
  const SolverConfig& cfg_;
};

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be at least 1");
  if (!(residual_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "residual_tol must be positive");
  if (!(armijo.shrink > 0.0 && armijo.shrink < 1.0)) throw Error(ErrorKind::InvalidArgument, "armijo shrink must lie in (0,1)");
  if (!(armijo.slope > 0.0 && armijo.slope < 1.0)) throw Error(ErrorKind::InvalidArgument, "armijo slope must lie in (0,1)");
  if (!(min_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "min_step must be positive");
  if (!(g_floor > 0.0)) throw Error(ErrorKind::InvalidArgument, "g_floor must be positive");
  estimator.validate();
}

std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::NotConverged: return "not_converged";
    case SolverStatus::DegenerateDirection: return "degenerate_direction";
  }
  return "unknown";
}

ResidualReport residual(const PseudoCone& k, const DiscreteMeasure& mu, double p, const EstimatorConfig& cfg) {
  if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must be a nonzero finite number");
  if (mu.size() != k.size()) throw Error(ErrorKind::DimensionMismatch, "measure and direction set differ in size");
  const auto vol = gaussian_volume(k, cfg);
  const auto sp = sp_measure_vector(k, p, cfg);
  const double m = moment(k.support(), mu, p);
  ResidualReport r;
  r.c = (p > 0.0 ? 1.0 : -1.0) * m / (p * vol.value);
  r.residual = mu.weights() - r.c * sp.values;
  r.rel = r.residual.lpNorm<1>() / mu.total();
  if (sp.method == Method::MonteCarlo || vol.method == Method::MonteCarlo) {
    const double dc = r.c * vol.combined_error() / vol.value;
    double sigma = 0.0;
    for (Eigen::Index i = 0; i < sp.values.size(); ++i) sigma += std::hypot(sp.values[i] * dc, r.c * sp.std_errors[i]);
    r.rel_sigma = sigma / mu.total();
  }
  return r;
}

Vec auto_initialize(const PolyhedralCone& cone, const DirectionSet& omega) {
  // [λh] = λ[h], so dist(o, [h₀·1]) is linear in h₀ and one evaluation fixes it.
  const PseudoCone unit(cone, omega, Vec::Ones(static_cast<Eigen::Index>(omega.size())));
  return Vec::Constant(static_cast<Eigen::Index>(omega.size()), 1.0 / distance_to_origin(unit));
}

SolverResult solve(const PolyhedralCone& cone, const DirectionSet& omega, const DiscreteMeasure& mu, double p,
                   const SolverConfig& cfg) {
  if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must be a nonzero finite number");
  cfg.validate();
  if (mu.size() != omega.size()) throw Error(ErrorKind::DimensionMismatch, "measure and direction set differ in size");
  const Vec h0 = cfg.initial_h ? *cfg.initial_h : auto_initialize(cone, omega);
  if (h0.size() != static_cast<Eigen::Index>(omega.size())) {
    throw Error(ErrorKind::DimensionMismatch, "initial support vector has wrong length");
  }
  if ((h0.array() <= 0.0).any()) throw Error(ErrorKind::NonPositiveSupport, "initial support values must be positive");

  const Ascent ascent(cone, omega, mu, p, cfg);
  const bool deterministic = cfg.estimator.deterministic_for(cone.dim());
  const auto m = static_cast<Eigen::Index>(omega.size());
  EstimatorConfig est = cfg.estimator;

  Vec y0 = ascent.clamp(p * h0.array().log().matrix());
  Point cur = ascent.probe(y0, est);
  if (ascent.snap_empty(cur)) cur = ascent.probe(cur.y, est);
  ascent.complete(cur, est);

  SolverResult res;
  Mat hinv = Mat::Identity(m, m);
  std::vector<int> empty_run(static_cast<std::size_t>(m), 0);
  double dist = distance_to_origin(*cur.k);
  res.min_distance = res.max_distance = dist;
  std::string failure;

  auto record = [&](int iter, const ResidualReport& r, double step) {
    res.trace.push_back({iter, ascent.functional(cur), r.rel, step, dist});
  };

  ResidualReport rep = ascent.report(cur);
  record(0, rep, 0.0);
  int iter = 0;
  int stalls = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const double tol = deterministic ? cfg.residual_tol : std::max(cfg.residual_tol, 2.0 * rep.rel_sigma);
    if (rep.rel <= tol) break;

    if (!deterministic) {
      // Fresh stream per iteration; the line search below reuses it.
      est.seed = cfg.estimator.seed + static_cast<std::uint64_t>(iter) + 1;
      cur = ascent.probe(cur.y, est);
      ascent.complete(cur, est);
      hinv.setIdentity();
    }

    bool accepted = false;
    double alpha = 1.0;
    Point next;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Vec dir = hinv * cur.grad;
      double slope = cur.grad.dot(dir);
      if (!(slope > 0.0)) {
        hinv.setIdentity();
        dir = cur.grad;
        slope = dir.squaredNorm();
      }
      const double cap = dir.lpNorm<Eigen::Infinity>();
      alpha = cap > kMaxLogStep ? kMaxLogStep / cap : 1.0;
      while (alpha * cap >= cfg.min_step) {
        Vec y = ascent.clamp(cur.y + alpha * dir);
        next = ascent.probe(y, est);
        const double gain = cur.grad.dot(y - cur.y);
        if (next.objective >= cur.objective + cfg.armijo.slope * gain && next.objective >= cur.objective) {
          accepted = true;
          break;
        }
        alpha *= cfg.armijo.shrink;
      }
      if (!accepted) hinv.setIdentity();
    }
    if (!accepted) {
      // A fixed sample set makes the volume estimate piecewise constant in h, so
      // a stalled search on one stream says little; retry on the next one.
      if (!deterministic && ++stalls < kMaxStalls) {
        record(iter + 1, rep, 0.0);
        continue;
      }
      failure = "line search made no progress";
      break;
    }
    stalls = 0;

    const bool snapped = ascent.snap_empty(next);
    if (snapped) next = ascent.probe(next.y, est);
    ascent.complete(next, est);

    if (deterministic && !snapped) {
      const Vec s = next.y - cur.y;
      const Vec q = cur.grad - next.grad;  // gradient change of the minimized -objective
      const double sq = s.dot(q);
      if (sq > 1e-14 * s.norm() * q.norm()) {
        if (res.trace.size() == 1) hinv *= sq / q.squaredNorm();
        const double r = 1.0 / sq;
        const Mat i_m = Mat::Identity(m, m);
        hinv = (i_m - r * s * q.transpose()) * hinv * (i_m - r * q * s.transpose()) + r * s * s.transpose();
      }
    } else {
      hinv.setIdentity();
    }

    cur = std::move(next);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& empties = cur.k->empty_facets();
      const bool empty = std::find(empties.begin(), empties.end(), static_cast<std::size_t>(i)) != empties.end();
      empty_run[static_cast<std::size_t>(i)] = empty ? empty_run[static_cast<std::size_t>(i)] + 1 : 0;
    }
    dist = distance_to_origin(*cur.k);
    res.min_distance = std::min(res.min_distance, dist);
    res.max_distance = std::max(res.max_distance, dist);
    rep = ascent.report(cur);
    record(iter + 1, rep, alpha);
    if (dist < kMinDistance || dist > kMaxDistance) {
      failure = "iterates left the bounded region";
      ++iter;
      break;
    }
  }

  res.h_star = cur.h;
  res.c = rep.c;
  res.residual = rep.residual;
  res.rel_residual = rep.rel;
  res.rel_residual_sigma = rep.rel_sigma;
  res.functional_value = ascent.functional(cur);
  res.iterations = iter;
  const double tol = deterministic ? cfg.residual_tol : std::max(cfg.residual_tol, 2.0 * rep.rel_sigma);
  res.converged = rep.rel <= tol;
  if (res.converged) {
    res.status = SolverStatus::Converged;
    res.message = "converged";
    return res;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (empty_run[static_cast<std::size_t>(i)] >= kEmptyPatience) res.degenerate.push_back(static_cast<std::size_t>(i));
  }
  res.status = res.degenerate.empty() ? SolverStatus::NotConverged : SolverStatus::DegenerateDirection;
  res.message = failure.empty() ? "iteration limit reached" : failure;
  return res;
}

}  // namespace gaussmink
