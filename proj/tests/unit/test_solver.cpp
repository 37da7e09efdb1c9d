#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "fixtures.hpp"
#include "gaussmink/error.hpp"
#include "gaussmink/solver.hpp"

using namespace gaussmink;
using fixtures::vec;

TEST(Solver, HalfLineMatchesStationaryRoot) {
  const auto c = half_line();
  const auto om = validate_directions(c, {vec({-1.0})});
  for (double p : {0.5, 1.0, 2.0}) {
    const double want = oracle::stationary_root_1d(p);
    for (double beta : {0.3, 1.0, 7.0}) {
      const auto res = solve(c, om, DiscreteMeasure(vec({beta})), p);
      ASSERT_TRUE(res.converged) << res.message;
      EXPECT_EQ(res.status, SolverStatus::Converged);
      EXPECT_NEAR(res.h_star[0], want, 1e-4) << "p=" << p << " beta=" << beta;
      EXPECT_LE(res.rel_residual, 1e-6);
    }
  }
}

TEST(Solver, SymmetricDataGivesSymmetricSolution) {
  const auto c = quarter_plane();
  const auto om =
      validate_directions(c, {vec({-std::cos(0.5), -std::sin(0.5)}), vec({-std::sin(0.5), -std::cos(0.5)})});
  for (double p : {0.5, 2.0, -1.0}) {
    const auto res = solve(c, om, DiscreteMeasure(vec({0.2, 0.2})), p);
    ASSERT_TRUE(res.converged) << res.message;
    EXPECT_NEAR(res.h_star[0], res.h_star[1], 1e-5 * res.h_star[0]);
  }
}

TEST(Solver, RecoversMeasureOfKnownShape) {
  CounterRng rng(404);
  int tested = 0;
  for (int draw = 0; draw < 200 && tested < 8; ++draw) {
    const auto inst = random_planar_instance(rng, 2 + rng.index(4));
    const double ps[] = {0.5, 1.0, 2.0, -1.0};
    const double p = ps[tested % 4];
    // μ := S_p of a shape whose facets all have positive length.
    const auto k0 = inst.shape();
    const auto sp = sp_measure_vector(k0, p);
    if ((sp.values.array() <= 1e-6).any()) continue;
    ++tested;
    const DiscreteMeasure mu(sp.values);
    const auto res = solve(inst.cone, inst.omega, mu, p);
    ASSERT_TRUE(res.converged) << "draw " << draw << ": " << res.message;
    EXPECT_LE(res.rel_residual, 1e-6);
    // Independent recomputation of the residual at the returned support.
    const auto rep = residual(PseudoCone(inst.cone, inst.omega, res.h_star), mu, p);
    EXPECT_NEAR(rep.rel, res.rel_residual, 1e-9);
    EXPECT_GT(rep.c, 0.0);
  }
  EXPECT_EQ(tested, 8);
}

TEST(Solver, ScaleOfMeasureOnlyChangesNormalization) {
  CounterRng rng(12);
  const auto inst = random_planar_instance(rng, 3);
  const DiscreteMeasure mu(random_vector(3, rng, 0.2, 1.0));
  const auto a = solve(inst.cone, inst.omega, mu, 0.5);
  const auto b = solve(inst.cone, inst.omega, mu.scaled(10.0), 0.5);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_NEAR((a.h_star - b.h_star).lpNorm<Eigen::Infinity>(), 0.0, 1e-4);
  EXPECT_NEAR(b.c / a.c, 10.0, 1e-3);
}

TEST(Solver, TraceIsRecorded) {
  const auto k = fixtures::diag1();
  SolverConfig cfg;
  cfg.initial_h = vec({0.3});
  const auto res = solve(k.cone(), k.directions(), DiscreteMeasure(vec({1.0})), 1.0, cfg);
  ASSERT_TRUE(res.converged);
  ASSERT_FALSE(res.trace.empty());
  EXPECT_EQ(res.trace.front().iteration, 0);
  EXPECT_EQ(static_cast<int>(res.trace.size()), res.iterations + 1);
  // Ascent: the objective never decreases along the trace.
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    EXPECT_GE(res.trace[i].functional, res.trace[i - 1].functional * (1.0 - 1e-12));
  }
}

TEST(Solver, ConfigValidation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_iters = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.armijo.shrink = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.residual_tol = -1.0;
  EXPECT_THROW(cfg.validate(), Error);

  const auto k = fixtures::diag1();
  EXPECT_THROW(solve(k.cone(), k.directions(), DiscreteMeasure(vec({1.0, 1.0})), 1.0), Error);
  EXPECT_THROW(solve(k.cone(), k.directions(), DiscreteMeasure(vec({1.0})), 0.0), Error);
}

TEST(Solver, ResidualScaling) {
  const auto k = fixtures::diag1();
  const DiscreteMeasure mu(vec({0.4}));
  const auto r = residual(k, mu, 1.0);
  const double gamma = gaussian_volume(k).value;
  EXPECT_NEAR(r.c, 0.4 / gamma, 1e-12);
  EXPECT_NEAR(r.residual[0], 0.4 - r.c * sp_measure(k, 0, 1.0).value, 1e-14);
  EXPECT_NEAR(r.rel, std::abs(r.residual[0]) / 0.4, 1e-14);
  const auto r2 = residual(k, mu.scaled(5.0), 1.0);
  EXPECT_NEAR(r2.c, 5.0 * r.c, 1e-12);
}

TEST(AutoInitialize, UnitDistance) {
  CounterRng rng(1);
  for (int t = 0; t < 5; ++t) {
    const auto inst = random_planar_instance(rng, 1 + rng.index(5));
    const Vec h0 = auto_initialize(inst.cone, inst.omega);
    EXPECT_TRUE((h0.array() == h0[0]).all());
    EXPECT_NEAR(distance_to_origin(PseudoCone(inst.cone, inst.omega, h0)), 1.0, 1e-9);
  }
}

TEST(Solver, MonteCarloCertificateWithFreshSeed) {
  const auto c = octant();
  const auto om = validate_directions(c, {vec({-1, -1, -1}).normalized(), vec({-3, -1, -1}).normalized(),
                                          vec({-1, -3, -1}).normalized(), vec({-1, -1, -3}).normalized()});
  SolverConfig cfg;
  cfg.estimator.n_samples = 100000;
  cfg.estimator.seed = 3;
  cfg.residual_tol = 1e-2;
  cfg.max_iters = 200;
  const DiscreteMeasure mu(vec({0.4, 0.2, 0.2, 0.2}));
  const auto res = solve(c, om, mu, 1.0, cfg);
  ASSERT_TRUE(res.converged) << res.message;
  EstimatorConfig fresh = cfg.estimator;
  fresh.seed = 9001;
  fresh.n_samples = 400000;
  const auto rep = residual(PseudoCone(c, om, res.h_star), mu, 1.0, fresh);
  EXPECT_LE(rep.rel, std::max(cfg.residual_tol, 2.0 * res.rel_residual_sigma) + 4.0 * rep.rel_sigma);
}
