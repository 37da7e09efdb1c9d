#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gaussmink/analysis.hpp"
#include "gaussmink/error.hpp"

using namespace gaussmink;
using fixtures::vec;

namespace {

// Quarter plane cut orthogonally to its axis: the section at distance t is a
// segment of length 2t centred on the axis.
double psi_oracle(double p, double t) {
  const double s = std::sqrt(2.0 * oracle::kPi) * std::exp(-0.5 * t * t) * (2.0 * oracle::phi_cdf(t) - 1.0);
  return std::pow(t, 1.0 - p) * s;
}

double oracle_peak(double p) {
  // ψ' changes sign once; bisect on a central difference.
  return oracle::bisect([p](double t) { return psi_oracle(p, t * (1 + 1e-7)) - psi_oracle(p, t * (1 - 1e-7)); },
                        0.05, 5.0);
}

}  // namespace

TEST(Psi, MatchesClosedFormOnQuarterPlane) {
  const auto c = quarter_plane();
  for (double p : {0.5, 1.0, -1.0, 1.5}) {
    for (double t : {0.01, 0.3, 1.0, 2.2, 5.0}) {
      EXPECT_NEAR(psi(c, fixtures::diag_dir(), p, t), psi_oracle(p, t), 1e-12 * (1.0 + psi_oracle(p, t)));
    }
  }
}

TEST(Psi, PositiveAndPowerRelated) {
  CounterRng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_planar_cone(rng);
    const Vec v = random_planar_directions(c, 1, rng)[0];
    for (double t : {0.1, 0.9, 2.0}) {
      const double one = psi(c, v, 1.0, t);
      EXPECT_GT(one, 0.0);
      for (double p : {0.5, -1.0}) EXPECT_NEAR(psi(c, v, p, t) / one, std::pow(t, 1.0 - p), 1e-12);
    }
  }
}

TEST(Psi, EndpointDecay) {
  const auto c = quarter_plane();
  const Vec v = fixtures::diag_dir();
  const double t_hi = default_psi_bracket(2).hi;
  for (double p : {0.5, 1.0, -1.0}) {
    const double tp = oracle_peak(p);
    const double peak = psi(c, v, p, tp);
    EXPECT_LE(psi(c, v, p, t_hi), 0.01 * peak);
    EXPECT_LE(psi(c, v, p, 1.5 * t_hi), 0.01 * peak);
    if (p == 1.0) {
      // For p = 1 ψ is linear near 0, so the 1% level is reached only below t_peak/50.
      EXPECT_NEAR(psi(c, v, p, tp / 50.0) / peak, 0.0332, 5e-4);
      EXPECT_LE(psi(c, v, p, tp / 200.0), 0.01 * peak);
    } else {
      EXPECT_LE(psi(c, v, p, tp / 50.0), 0.01 * peak);
      EXPECT_LE(psi(c, v, p, tp / 500.0), 0.01 * peak);
    }
  }
}

TEST(Psi, RequiresPBelowDimension) {
  const auto c = quarter_plane();
  for (double p : {2.0, 3.0}) {
    try {
      psi(c, fixtures::diag_dir(), p, 1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::PGreaterEqualN);
    }
    try {
      find_nonunique_pair(c, fixtures::diag_dir(), p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::PGreaterEqualN);
    }
  }
}

class NonUnique : public ::testing::TestWithParam<double> {};

TEST_P(NonUnique, QuarterPlanePair) {
  const double p = GetParam();
  const auto pair = find_nonunique_pair(quarter_plane(), fixtures::diag_dir(), p);
  EXPECT_TRUE(pair.certified);
  EXPECT_FALSE(pair.multiple_maxima);
  EXPECT_LT(pair.t1, pair.t_peak);
  EXPECT_LT(pair.t_peak, pair.t2);
  EXPECT_GE(pair.t2 - pair.t1, 1e-3 * pair.t_peak);
  EXPECT_LE(pair.measure_gap(), 1e-6);
  EXPECT_LE(pair.measure_gap(), pair.budget);
  EXPECT_NEAR(pair.t_peak, oracle_peak(p), 1e-6);
  EXPECT_NEAR(psi_oracle(p, pair.t1), 0.5 * psi_oracle(p, pair.t_peak), 1e-10);
  EXPECT_NEAR(psi_oracle(p, pair.t2), 0.5 * psi_oracle(p, pair.t_peak), 1e-10);
  // The shapes are genuinely different.
  const double sigma = std::hypot(pair.volume_k.combined_error(), pair.volume_l.combined_error());
  EXPECT_GT(std::abs(pair.volume_k.value - pair.volume_l.value), 3.0 * sigma);
}

INSTANTIATE_TEST_SUITE_P(Exponents, NonUnique, ::testing::Values(0.5, 1.0, -1.0));

TEST(NonUniquePeaks, FrozenValues) {
  const auto c = quarter_plane();
  EXPECT_NEAR(find_nonunique_pair(c, fixtures::diag_dir(), 0.5).t_peak, 1.0806322, 1e-6);
  EXPECT_NEAR(find_nonunique_pair(c, fixtures::diag_dir(), 1.0).t_peak, 0.8769010, 1e-6);
  EXPECT_NEAR(find_nonunique_pair(c, fixtures::diag_dir(), -1.0).t_peak, 1.5557739, 1e-6);
}

TEST(NonUniquePeaks, ArgumentChecks) {
  const auto c = quarter_plane();
  EXPECT_THROW(find_nonunique_pair(c, fixtures::diag_dir(), 0.5, 1.0), Error);
  EXPECT_THROW(find_nonunique_pair(c, fixtures::diag_dir(), 0.5, 0.5, 0.0), Error);
  EXPECT_THROW(find_nonunique_pair(c, vec({1.0, 0.0}), 0.5), Error);
}

TEST(MixedVolume, EqualityForIdenticalShapes) {
  CounterRng rng(6);
  const auto k = random_planar_instance(rng, 4).shape();
  for (double p : {0.25, 1.0}) {
    const auto chk = mixed_volume_inequality_check(k, k, p);
    EXPECT_TRUE(chk.holds);
    EXPECT_TRUE(chk.near_equality());
    EXPECT_NEAR(chk.lhs, 0.0, 1e-15);
  }
}

TEST(MixedVolume, StrictForDilates) {
  CounterRng rng(61);
  const auto inst = random_planar_instance(rng, 3);
  const auto k = inst.shape();
  for (double lambda : {0.7, 1.5}) {
    const auto l = k.with_support(lambda * inst.h);
    for (double p : {0.5, 1.0}) {
      const auto chk = mixed_volume_inequality_check(k, l, p);
      EXPECT_TRUE(chk.holds);
      EXPECT_FALSE(chk.near_equality());
      EXPECT_GT(chk.gap(), 0.0);
    }
  }
}

TEST(MixedVolume, RandomPairs) {
  CounterRng rng(616);
  for (int t = 0; t < 30; ++t) {
    const auto inst = random_planar_instance(rng, 1 + rng.index(5));
    const auto k = inst.shape();
    const auto l = k.with_support(random_vector(k.size(), rng, 0.5, 2.0));
    const double p = 0.25 * (1 + t % 4);
    EXPECT_TRUE(mixed_volume_inequality_check(k, l, p).holds) << "pair " << t;
    EXPECT_TRUE(log_concavity_chain_check(k, l, p, rng.uniform()).holds) << "pair " << t;
  }
}

TEST(MixedVolume, ArgumentChecks) {
  const auto k = fixtures::diag1();
  EXPECT_THROW(mixed_volume_inequality_check(k, k, 1.5), Error);
  EXPECT_THROW(mixed_volume_inequality_check(k, k, -0.5), Error);
  const auto c = quarter_plane();
  const PseudoCone other(c, validate_directions(c, {vec({-std::cos(0.6), -std::sin(0.6)})}), vec({1.0}));
  EXPECT_THROW(mixed_volume_inequality_check(k, other, 1.0), Error);
  EXPECT_THROW(log_concavity_chain_check(k, k, 1.0, 1.5), Error);
}

TEST(LogConcavity, EndpointsAreEqualities) {
  CounterRng rng(9);
  const auto inst = random_planar_instance(rng, 3);
  const auto k = inst.shape();
  const auto l = k.with_support(random_vector(3, rng, 0.5, 2.0));
  for (double t : {0.0, 1.0}) {
    const auto chk = log_concavity_chain_check(k, l, 0.5, t);
    EXPECT_TRUE(chk.holds);
    EXPECT_TRUE(chk.near_equality());
  }
}

TEST(Uniqueness, Verdicts) {
  const auto k = fixtures::diag1();
  const auto same = uniqueness_check(k, k, 1.0);
  EXPECT_TRUE(same.measures_equal);
  EXPECT_TRUE(same.volumes_equal);
  EXPECT_EQ(same.verdict, Verdict::Consistent);
  EXPECT_EQ(to_string(same.verdict), "CONSISTENT");

  // The non-unique pair shares S_p but not the volume, so uniqueness is not contradicted.
  const auto pair = find_nonunique_pair(quarter_plane(), fixtures::diag_dir(), 0.5);
  const auto rep = uniqueness_check(*pair.k, *pair.l, 0.5);
  EXPECT_TRUE(rep.measures_equal);
  EXPECT_FALSE(rep.volumes_equal);
  EXPECT_GT(rep.support_distance, 1e-3);
  EXPECT_EQ(rep.verdict, Verdict::Consistent);

  const auto apart = uniqueness_check(k, fixtures::diag1(1.3), 0.5);
  EXPECT_FALSE(apart.measures_equal);
  EXPECT_EQ(apart.verdict, Verdict::Consistent);
  EXPECT_EQ(to_string(Verdict::TheoremViolation), "THEOREM_VIOLATION");
}
