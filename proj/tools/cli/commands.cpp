#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "cli/csv.hpp"
#include "cli/problem_spec.hpp"
#include "gaussmink/analysis.hpp"
#include "gaussmink/error.hpp"
#include "gaussmink/normal.hpp"
#include "gaussmink/rng.hpp"

namespace gaussmink::cli {

namespace {

using nlohmann::json;

constexpr std::int64_t kTailSamples = 1000000;
constexpr int kCurveRows = 256;
constexpr int kPairsPerP = 25;

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SpecError& e) {
    log << "error: " << e.what() << '\n';
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    log << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

ProblemSpec load(const Options& opt, const SpecRequirements& req) {
  if (opt.spec.empty()) throw SpecError("--spec: a problem file is required");
  ProblemSpec spec = load_problem(opt.spec, req);
  if (opt.seed) spec.estimator.seed = *opt.seed;
  if (opt.samples) {
    if (*opt.samples < 10000) throw SpecError("--samples: must be at least 10000");
    spec.estimator.n_samples = *opt.samples;
  }
  if (opt.path) spec.estimator.path = parse_path(*opt.path);
  if (opt.p) {
    if (*opt.p == 0.0 || !std::isfinite(*opt.p)) throw SpecError("--p: p = 0 is out of scope");
    spec.p = *opt.p;
  }
  spec.solver.estimator = spec.estimator;
  return spec;
}

double require_p(const ProblemSpec& spec) {
  if (!spec.p) throw SpecError("spec.p: missing required field (or pass --p)");
  return *spec.p;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError(path.string() + ": cannot open for writing");
  out << doc.dump(2) << '\n';
}

void ensure_dir(const std::filesystem::path& dir) { std::filesystem::create_directories(dir); }

json estimator_json(const EstimatorConfig& cfg) {
  return {{"samples", cfg.n_samples},
          {"seed", cfg.seed},
          {"path", path_name(cfg.path)},
          {"quadrature_steps", cfg.quadrature_steps},
          {"target_abs_error", cfg.target_abs_error}};
}

struct Geometry {
  PolyhedralCone cone;
  DirectionSet omega;
};

Geometry geometry(const ProblemSpec& spec) {
  auto cone = make_cone(spec.generators);
  auto omega = validate_directions(cone, spec.directions);
  return {std::move(cone), std::move(omega)};
}

Vec shape_support(const ProblemSpec& spec, const Geometry& g) {
  return spec.solver.initial_h ? *spec.solver.initial_h : auto_initialize(g.cone, g.omega);
}

// One verification row.
struct Check {
  std::string id;
  double lhs;
  double rhs;
  double budget;
  bool pass;
};

Check equal_within(std::string id, double lhs, double rhs, double budget) {
  return {std::move(id), lhs, rhs, budget, std::abs(lhs - rhs) <= budget};
}

Check at_least(std::string id, const InequalityCheck& c, bool inject) {
  if (inject) return {std::move(id), c.rhs, c.lhs, c.budget, c.rhs >= c.lhs - c.budget};
  return {std::move(id), c.lhs, c.rhs, c.budget, c.holds};
}

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

std::vector<Check> suite_variational(const ProblemSpec& spec, const Geometry& g) {
  const double p = require_p(spec);
  const auto& cfg = spec.estimator;
  const PseudoCone k(g.cone, g.omega, shape_support(spec, g));
  const auto m = static_cast<Eigen::Index>(k.size());
  const double step = default_fd_step(k, p);
  const auto grad = grad_volume_in_g(k, p, cfg);
  std::vector<Check> rows;

  auto fd_row = [&](std::string id, const Vec& f) {
    const auto fd = fd_volume_derivative(k, f, p, step, cfg);
    const double analytic = grad.value.dot(f);
    const double err = fd.combined_error() + grad.error.cwiseAbs().dot(f.cwiseAbs());
    rows.push_back(equal_within(std::move(id), fd.value, analytic, std::max(1e-5, 3.0 * err)));
  };
  for (Eigen::Index i = 0; i < m; ++i) fd_row(indexed("dvol_dg", static_cast<std::size_t>(i)), Vec::Unit(m, i));
  CounterRng rng(cfg.seed, 0x5eed);
  Vec f(m);
  for (Eigen::Index i = 0; i < m; ++i) f[i] = rng.uniform(-1.0, 1.0);
  fd_row("dvol_dg[random]", f);

  if (spec.weights) {
    const DiscreteMeasure mu(*spec.weights);
    const auto fn = [&](const PseudoCone& s) { return p > 0.0 ? functional_I(s, mu, p, cfg) : functional_phi(s, mu, p, cfg); };
    const auto gf = p > 0.0 ? grad_I_in_g(k, mu, p, cfg) : grad_phi_in_g(k, mu, p, cfg);
    const std::string name = p > 0.0 ? "dI_dg" : "dphi_dg";
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vec e = Vec::Unit(m, i);
      const auto hi = fn(perturbed(k, e, p, step));
      const auto lo = fn(perturbed(k, e, p, -step));
      const double fd = (hi.value - lo.value) / (2.0 * step);
      const double err = (hi.combined_error() + lo.combined_error()) / (2.0 * step) + gf.error[i];
      rows.push_back(equal_within(indexed(name, static_cast<std::size_t>(i)), fd, gf.value[i], std::max(1e-5, 3.0 * err)));
    }
  }

  try {
    const auto r = radial_derivative_check(k, f, g.cone.ref_dir(), p, 0.1 * step);
    rows.push_back(equal_within("radial_derivative[ref_dir]", r.fd, r.analytic, 1e-6));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SwitchPointTooClose) throw;
  }
  return rows;
}

std::vector<Check> suite_oracles(const ProblemSpec& spec, const Geometry& g) {
  const double p = require_p(spec);
  const auto& cfg = spec.estimator;
  const PseudoCone k(g.cone, g.omega, shape_support(spec, g));
  const auto m = static_cast<Eigen::Index>(k.size());
  const double step = default_fd_step(k, p);
  std::vector<Check> rows;

  std::vector<MeasureEstimate> radial;
  if (k.dim() == 2 || k.dim() == 3) radial = radial_transform_facets(k, gaussian_surface_density(p), cfg);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto facet = sp_measure(k, idx, p, cfg);
    if (!radial.empty()) {
      const double err = std::hypot(facet.combined_error(), radial[idx].combined_error());
      rows.push_back(equal_within(indexed("facet_vs_radial", idx), facet.value, radial[idx].value, 3.0 * err + 1e-12));
    }
    // dV_G/dg_i = S_{p,i} / p.
    const auto fd = fd_covolume_derivative(k, Vec::Unit(m, i), p, step, cfg);
    const double err = std::hypot(facet.combined_error(), std::abs(p) * fd.combined_error());
    rows.push_back(
        equal_within(indexed("facet_vs_covolume_fd", idx), facet.value, p * fd.value, 3.0 * err + 1e-6 * (1.0 + facet.value)));
  }
  const auto vk = gaussian_volume(k, cfg);
  const auto vg = covolume(k, cfg);
  const auto vc = gaussian_volume(g.cone, cfg);
  const double err = vk.combined_error() + vg.combined_error() + vc.combined_error();
  rows.push_back(equal_within("volume_plus_covolume", vk.value + vg.value, vc.value, 3.0 * err + 1e-12));
  return rows;
}

std::vector<Check> suite_inequalities(const ProblemSpec& spec, const Geometry& g, bool inject) {
  const auto& cfg = spec.estimator;
  const PseudoCone k(g.cone, g.omega, shape_support(spec, g));
  const Vec hbar = support_values(k);
  const PseudoCone kbar = k.with_support(hbar);
  CounterRng rng(cfg.seed, 0x1e0);
  std::vector<Check> rows;
  for (double p : {0.25, 0.5, 0.75, 1.0}) {
    const std::string tag = "[p=" + format_double(p) + "]";
    for (int j = 0; j < kPairsPerP; ++j) {
      Vec hl = hbar;
      for (Eigen::Index i = 0; i < hl.size(); ++i) hl[i] *= std::exp(rng.uniform(-0.5, 0.5));
      const PseudoCone l = k.with_support(hl);
      const double t = rng.uniform(0.1, 0.9);
      const std::string id = tag + "[" + std::to_string(j) + "]";
      rows.push_back(at_least("mixed_volume" + id, mixed_volume_inequality_check(kbar, l, p, cfg), inject));
      rows.push_back(at_least("log_concavity" + id, log_concavity_chain_check(kbar, l, p, t, cfg), inject));
    }
  }
  return rows;
}

// Runs at N = 10^6 unless a sample count was given on the command line.
std::vector<Check> suite_tail(const ProblemSpec& spec, bool samples_given) {
  EstimatorConfig cfg = spec.estimator;
  if (!samples_given) cfg.n_samples = std::max(cfg.n_samples, kTailSamples);
  const int n = spec.dim();
  std::vector<Check> rows;
  for (double r : {1.0, 2.0, 4.0}) {
    const auto mc = ball_complement_mc(r, n, cfg);
    const double bound = tail_bound(r, n);
    const double budget = 3.0 * mc.std_error;
    rows.push_back({"tail_mc[r=" + format_double(r) + "]", mc.value, bound, budget, mc.value <= bound + budget});
    if (n == 1) {
      const double exact = 2.0 * std_normal_sf(r);
      rows.push_back({"tail_exact[r=" + format_double(r) + "]", exact, bound, 0.0, exact <= bound});
    }
  }
  return rows;
}

}  // namespace

int cmd_solve(const Options& opt, std::ostream& log) {
  return guarded(log, [&] {
    ProblemSpec spec = load(opt, {});
    if (opt.tol) spec.solver.residual_tol = *opt.tol;
    const auto g = geometry(spec);
    const DiscreteMeasure mu(*spec.weights);
    const double p = *spec.p;
    const auto res = solve(g.cone, g.omega, mu, p, spec.solver);

    ensure_dir(opt.out);
    json degenerate = json::array();
    for (auto i : res.degenerate) degenerate.push_back(i);
    const json doc = {{"status", std::string(to_string(res.status))},
                      {"converged", res.converged},
                      {"message", res.message},
                      {"p", p},
                      {"h_star", to_json(res.h_star)},
                      {"c", res.c},
                      {"residual", to_json(res.residual)},
                      {"rel_residual", res.rel_residual},
                      {"rel_residual_sigma", res.rel_residual_sigma},
                      {"residual_tol", spec.solver.residual_tol},
                      {"functional", p > 0.0 ? "I" : "phi"},
                      {"functional_value", res.functional_value},
                      {"iterations", res.iterations},
                      {"min_distance", res.min_distance},
                      {"max_distance", res.max_distance},
                      {"degenerate_directions", degenerate},
                      {"estimator", estimator_json(spec.estimator)}};
    write_json(opt.out / "result.json", doc);
    CsvWriter trace(opt.out / "trace.csv", {"iteration", "functional", "rel_residual", "step", "distance"});
    for (const auto& row : res.trace) {
      trace.row({std::to_string(row.iteration), format_double(row.functional), format_double(row.rel_residual),
                 format_double(row.step), format_double(row.distance)});
    }
    log << "solve: " << to_string(res.status) << " after " << res.iterations
        << " iterations, rel_residual = " << format_double(res.rel_residual) << '\n';
    return res.converged ? kExitOk : kExitNotConverged;
  });
}

int cmd_verify(const Options& opt, const std::string& suite, bool inject_violation, std::ostream& log) {
  return guarded(log, [&] {
    const bool needs_dirs = suite != "tail";
    ProblemSpec spec = load(opt, {needs_dirs, false, suite == "variational" || suite == "oracles"});
    std::vector<Check> rows;
    if (suite == "tail") {
      rows = suite_tail(spec, opt.samples.has_value());
    } else {
      const auto g = geometry(spec);
      if (suite == "variational") {
        rows = suite_variational(spec, g);
      } else if (suite == "oracles") {
        rows = suite_oracles(spec, g);
      } else if (suite == "inequalities") {
        rows = suite_inequalities(spec, g, inject_violation);
      } else {
        throw SpecError("--suite: unknown suite '" + suite + "' (expected variational, oracles, inequalities, tail)");
      }
    }
    ensure_dir(opt.out);
    CsvWriter csv(opt.out / ("verify_" + suite + ".csv"), {"check_id", "lhs", "rhs", "budget", "pass"});
    std::size_t failed = 0;
    for (const auto& r : rows) {
      csv.row({r.id, format_double(r.lhs), format_double(r.rhs), format_double(r.budget), r.pass ? "true" : "false"});
      if (!r.pass) {
        ++failed;
        log << "FAIL " << r.id << ": lhs = " << format_double(r.lhs) << ", rhs = " << format_double(r.rhs)
            << ", budget = " << format_double(r.budget) << '\n';
      }
    }
    log << "verify " << suite << ": " << rows.size() - failed << "/" << rows.size() << " checks passed\n";
    return failed == 0 ? kExitOk : kExitCheckFailed;
  });
}

int cmd_nonunique(const Options& opt, std::ostream& log) {
  return guarded(log, [&] {
    ProblemSpec spec = load(opt, {false, false, false});
    const double p = require_p(spec);
    const auto cone = make_cone(spec.generators);
    const Vec v = spec.directions.empty() ? Vec(-cone.ref_dir()) : spec.directions.front();
    const double theta = opt.theta.value_or(0.5);
    const double tol = opt.tol.value_or(1e-13);
    const auto pair = find_nonunique_pair(cone, v, p, theta, tol, spec.estimator);

    ensure_dir(opt.out);
    json doc = {{"p", p},
                {"theta", theta},
                {"direction", to_json(v)},
                {"t1", pair.t1},
                {"t2", pair.t2},
                {"t_peak", pair.t_peak},
                {"psi_peak", pair.psi_peak},
                {"psi_level", pair.psi_level},
                {"bracket", {pair.bracket.lo, pair.bracket.hi}},
                {"sp_K", to_json(pair.sp_k)},
                {"sp_L", to_json(pair.sp_l)},
                {"volume_K", to_json(pair.volume_k)},
                {"volume_L", to_json(pair.volume_l)},
                {"measure_gap", pair.measure_gap()},
                {"budget", pair.budget},
                {"certified", pair.certified},
                {"multiple_maxima", pair.multiple_maxima}};
    if (p > 0.0 && p <= 1.0) {
      const auto u = uniqueness_check(*pair.k, *pair.l, p, spec.estimator);
      doc["uniqueness_verdict"] = std::string(to_string(u.verdict));
    }
    write_json(opt.out / "pair.json", doc);

    CsvWriter curve(opt.out / "psi_curve.csv", {"t", "psi"});
    const double ratio = std::log(pair.bracket.hi / pair.bracket.lo) / (kCurveRows - 1);
    for (int j = 0; j < kCurveRows; ++j) {
      const double t = pair.bracket.lo * std::exp(ratio * j);
      curve.row({format_double(t), format_double(psi(cone, v, p, t, spec.estimator))});
    }
    log << "nonunique: t1 = " << format_double(pair.t1) << ", t2 = " << format_double(pair.t2)
        << ", |S_p(K) - S_p(L)| = " << format_double(pair.measure_gap()) << (pair.certified ? "" : " (NOT certified)")
        << '\n';
    return pair.certified ? kExitOk : kExitCheckFailed;
  });
}

int cmd_measure(const Options& opt, const std::vector<double>& h, std::ostream& log) {
  return guarded(log, [&] {
    ProblemSpec spec = load(opt, {true, false, true});
    const double p = *spec.p;
    const auto g = geometry(spec);
    if (h.size() != g.omega.size()) {
      throw SpecError("--h: expected " + std::to_string(g.omega.size()) + " support values");
    }
    const Vec hv = Eigen::Map<const Vec>(h.data(), static_cast<Eigen::Index>(h.size()));
    const PseudoCone k(g.cone, g.omega, hv);
    const auto& cfg = spec.estimator;
    const auto vk = gaussian_volume(k, cfg);
    const auto vg = covolume(k, cfg);
    const auto vc = gaussian_volume(g.cone, cfg);
    json facets = json::array();
    for (std::size_t i = 0; i < k.size(); ++i) {
      facets.push_back({{"index", i},
                        {"empty", k.facet(i).empty()},
                        {"gaussian_area", to_json(facet_gaussian_area(k, i, cfg))},
                        {"sp", to_json(sp_measure(k, i, p, cfg))}});
    }
    const json doc = {{"p", p},
                      {"h", to_json(hv)},
                      {"gaussian_volume", to_json(vk)},
                      {"covolume", to_json(vg)},
                      {"cone_volume", to_json(vc)},
                      {"identity_residual", vk.value + vg.value - vc.value},
                      {"facets", facets},
                      {"estimator", estimator_json(cfg)}};
    ensure_dir(opt.out);
    write_json(opt.out / "measure.json", doc);
    log << doc.dump(2) << '\n';
    return kExitOk;
  });
}

}  // namespace gaussmink::cli
