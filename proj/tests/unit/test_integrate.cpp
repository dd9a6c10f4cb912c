#include <cmath>

#include <gtest/gtest.h>

#include "bjacobi/integrate.hpp"
#include "oracles.hpp"

using namespace bjacobi;

namespace {

IntegratorConfig config(double T, double dt = 1e-3) {
  IntegratorConfig c;
  c.horizon_T = T;
  c.dt = dt;
  return c;
}

bool same(const PathRecord& a, const PathRecord& b) {
  if (a.times != b.times || a.states.size() != b.states.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    if (a.states[i].values != b.states[i].values) return false;
  return a.termination == b.termination && a.refinements == b.refinements &&
         a.collisions == b.collisions && a.tamed_steps == b.tamed_steps;
}

}  // namespace

TEST(SimulatePath, ZeroNoiseStaysAtDriftRoot) {
  const LambdaModel m({1, 3.0, 3.0, 1.0});
  const auto r = simulate_path(m, config(1.0), {Coord::Lambda, {0.5}}, NoiseSource::zero());
  EXPECT_EQ(r.termination, Termination::HorizonReached);
  ASSERT_EQ(r.states.size(), 1001u);
  for (const auto& s : r.states) EXPECT_EQ(s[0], 0.5);
}

TEST(SimulatePath, Deterministic) {
  const LambdaModel m({3, 4.0, 4.0, 1.0});
  const StateVector x0{Coord::Lambda, {0.2, 0.5, 0.8}};
  const auto a = simulate_path(m, config(1.0), x0, NoiseSource(9, 4));
  const auto b = simulate_path(m, config(1.0), x0, NoiseSource(9, 4));
  EXPECT_TRUE(same(a, b));
  const auto c = simulate_path(m, config(1.0), x0, NoiseSource(9, 5));
  EXPECT_FALSE(same(a, c));
}

TEST(SimulatePath, LambdaStatesOrderedAndInRange) {
  const LambdaModel m({2, 3.0, 3.0, 1.0});
  for (std::uint64_t path = 0; path < 20; ++path) {
    const auto r = simulate_path(m, config(1.0), {Coord::Lambda, {1.0 / 3, 2.0 / 3}},
                                 NoiseSource(1, path));
    for (const auto& s : r.states) {
      EXPECT_LE(s[0], s[1]);
      EXPECT_GE(s[0], 0.0);
      EXPECT_LE(s[1], 1.0);
    }
  }
}

TEST(SimulatePath, SmallBetaPassesThroughCollisions) {
  const LambdaModel m({3, 3.0, 3.0, 0.3});
  auto c = config(5.0);
  const auto r = simulate_path(m, c, {Coord::Lambda, {0.3, 0.5, 0.7}}, NoiseSource(2, 0));
  EXPECT_EQ(r.termination, Termination::HorizonReached);
  for (const auto& s : r.states) {
    EXPECT_LE(s[0], s[1]);
    EXPECT_LE(s[1], s[2]);
  }
}

TEST(SimulatePath, PhiAndPsiStayInRange) {
  const ModelParams p{2, 3.0, 3.0, 1.0};
  auto c = config(1.0);
  c.scheme = Scheme::EMPhi;
  const auto r = simulate_path(PhiModel(p), c, {Coord::Phi, {0.6, 1.0}}, NoiseSource(3, 0));
  for (const auto& s : r.states)
    for (double v : s.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, kHalfPi);
    }
  const auto q = simulate_path(PsiModel(p), config(1.0), {Coord::Psi, {0.3, 1.0}}, NoiseSource(3, 0));
  for (const auto& s : q.states)
    for (double v : s.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, kHalfPi * kHalfPi);
    }
}

TEST(SimulatePath, RecordStride) {
  const LambdaModel m({1, 3.0, 3.0, 1.0});
  auto c = config(1.0);
  c.record_stride = 100;
  const auto r = simulate_path(m, c, {Coord::Lambda, {0.4}}, NoiseSource(1, 0));
  ASSERT_EQ(r.times.size(), 11u);
  EXPECT_NEAR(r.times.back(), 1.0, 1e-12);
}

TEST(SimulatePath, ObserverStopsEarly) {
  const LambdaModel m({1, 3.0, 3.0, 1.0});
  const auto r = simulate_path(m, config(1.0), {Coord::Lambda, {0.4}}, NoiseSource(1, 0),
                               [](const StepView& v) { return v.step < 10; });
  EXPECT_EQ(r.termination, Termination::StoppedEarly);
  EXPECT_EQ(r.times.size(), 11u);
}

TEST(SimulatePath, OneParticleMeanMatchesLinearDrift) {
  const ModelParams p{1, 3.0, 3.0, 1.0};
  const LambdaModel m(p);
  const int paths = 2000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < paths; ++i) {
    const auto r = simulate_path(m, config(0.3), {Coord::Lambda, {0.3}}, NoiseSource(11, i));
    const double v = r.states.back()[0];
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / paths;
  const double se = std::sqrt((sum2 / paths - mean * mean) / paths);
  const double want = 0.5 - 0.2 * std::exp(-6.0 * 0.3);
  EXPECT_NEAR(mean, want, 4 * se + 0.002);
}

TEST(SimulateCoupled, IdenticalInputsGiveIdenticalPaths) {
  const LambdaModel m({2, 3.0, 3.0, 1.0});
  const StateVector x0{Coord::Lambda, {0.3, 0.6}};
  const auto [a, b] = simulate_coupled(m, m, config(1.0), x0, x0, NoiseSource(4, 1));
  EXPECT_TRUE(same(a, b));
}

TEST(SimulateCoupled, CirComparisonHoldsPathwise) {
  const CirModel upper({3.0, 0.0, 2.0}), lower({2.0, 0.0, 2.0});
  for (std::uint64_t path = 0; path < 50; ++path) {
    const auto [a, b] = simulate_coupled(upper, lower, config(5.0), {Coord::Reference, {1.0}},
                                         {Coord::Reference, {1.0}}, NoiseSource(5, path));
    for (std::size_t i = 0; i < a.states.size(); ++i) ASSERT_GE(a.states[i][0], b.states[i][0]);
  }
}

TEST(SimulateCoupled, OneParticleOrderedInP) {
  const LambdaModel upper({1, 4.0, 3.0, 1.0}), lower({1, 3.0, 3.0, 1.0});
  const StateVector x0{Coord::Lambda, {0.5}};
  for (std::uint64_t path = 0; path < 1000; ++path) {
    const auto [a, b] = simulate_coupled(upper, lower, config(1.0), x0, x0, NoiseSource(6, path));
    for (std::size_t i = 0; i < a.states.size(); ++i) ASSERT_GE(a.states[i][0], b.states[i][0]);
  }
}

TEST(SimulateCir, ZeroNoiseZeroDriftIsConstant) {
  const auto r = simulate_cir({0.0, 0.0, 2.0}, config(1.0), 0.7, NoiseSource::zero());
  for (const auto& s : r.states) EXPECT_EQ(s[0], 0.7);
}

TEST(SimulateJacobi, StaysInUnitInterval) {
  const auto r = simulate_jacobi({2.0, 2.0}, config(2.0), 0.5, NoiseSource(1, 0));
  for (const auto& s : r.states) {
    EXPECT_GE(s[0], 0.0);
    EXPECT_LE(s[0], 1.0);
  }
}

TEST(IntegratorConfig, ValidationAndSteps) {
  auto c = config(1.0);
  EXPECT_EQ(c.steps(), 1000u);
  c.dt = 0.0;
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::Config);
  c = config(1.0);
  c.max_refinements = IntegratorConfig::kMaxRefinementsLimit + 1;
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::Config);
  c = config(1.0);
  c.record_stride = 0;
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::Config);
}

TEST(IntegratorConfig, CanonicalTextSeparatesConfigs) {
  auto a = config(1.0), b = config(1.0);
  EXPECT_EQ(a.canonical(), b.canonical());
  b.dt = 1e-3 + 1e-18;
  EXPECT_NE(a.canonical(), b.canonical());
}

TEST(Schemes, NamesRoundTrip) {
  for (auto s : {Scheme::TruncatedEMLambda, Scheme::EMPhi})
    EXPECT_EQ(scheme_from_string(to_string(s)), s);
  EXPECT_ERROR_KIND(scheme_from_string("milstein"), ErrorKind::Config);
}

TEST(Hashing, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex_u64(0xabcULL), "0000000000000abc");
}
