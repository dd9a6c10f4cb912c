#include <gtest/gtest.h>

#include "bjacobi/events.hpp"
#include "oracles.hpp"

using namespace bjacobi;

namespace {

PathRecord fixture(const std::vector<std::vector<double>>& rows, double dt = 1.0) {
  PathRecord p;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.times.push_back(i * dt);
    p.states.push_back({Coord::Lambda, rows[i]});
  }
  return p;
}

PathRecord constant(std::vector<double> x, int rows = 5) {
  return fixture(std::vector<std::vector<double>>(rows, x));
}

}  // namespace

TEST(FirstSumBelow, ConstantPathNoHit) {
  const auto r = first_sum_below(constant({0.3, 0.7}), 1, 0.1);
  EXPECT_FALSE(r.first_hit_time);
  EXPECT_EQ(r.min_value, 0.3);
}

TEST(FirstSumBelow, DeltaEqualToNHitsImmediately) {
  const auto r = first_sum_below(constant({0.3, 0.7}), 2, 2.0);
  ASSERT_TRUE(r.first_hit_time);
  EXPECT_EQ(*r.first_hit_time, 0.0);
}

TEST(FirstSumBelow, ConstructedDip) {
  const auto p = fixture({{0.2, 0.5}, {0.1, 0.3}, {0.05, 0.2}, {0.001, 0.003}, {0.1, 0.4}}, 0.625);
  const auto r = first_sum_below(p, 2, 0.005);
  ASSERT_TRUE(r.first_hit_time);
  EXPECT_EQ(*r.first_hit_time, 1.875);
  EXPECT_DOUBLE_EQ(r.min_value, 0.004);
  EXPECT_EQ(r.argmin_time, 1.875);
}

TEST(FirstSumBelow, DipAtTwoAndAHalf) {
  std::vector<std::vector<double>> rows(11, {0.2, 0.6});
  rows[5] = {0.001, 0.003};
  const auto r = first_sum_below(fixture(rows, 0.5), 2, 0.005);
  ASSERT_TRUE(r.first_hit_time);
  EXPECT_EQ(*r.first_hit_time, 2.5);
}

TEST(FirstSumAbove, Examples) {
  EXPECT_FALSE(first_sum_above(constant({0.3, 0.7}), 1, 0.1).first_hit_time);
  const auto r = first_sum_above(constant({0.3, 0.95}), 1, 0.1);
  ASSERT_TRUE(r.first_hit_time);
  EXPECT_EQ(*r.first_hit_time, 0.0);
}

TEST(FirstSumAbove, ReflectionEquivariance) {
  const auto p = fixture({{0.2, 0.5, 0.9}, {0.1, 0.3, 0.97}, {0.01, 0.2, 0.999}, {0.1, 0.4, 0.6}}, 0.5);
  const auto q = reflect(p);
  for (int k = 1; k <= 3; ++k)
    for (double d : {0.01, 0.05, 0.2, 0.5}) {
      const auto a = first_sum_above(p, k, d), b = first_sum_below(q, k, d);
      EXPECT_EQ(a.first_hit_time, b.first_hit_time);
      EXPECT_EQ(a.min_value, b.min_value);
      EXPECT_EQ(a.argmin_time, b.argmin_time);
    }
}

TEST(FirstSumBelow, SubsampledGridNeverHitsEarlier) {
  const auto p = fixture({{0.2, 0.5}, {0.01, 0.3}, {0.05, 0.2}, {0.001, 0.003}, {0.1, 0.4},
                          {0.0005, 0.002}});
  PathRecord sub;
  for (std::size_t i = 0; i < p.times.size(); i += 2) {
    sub.times.push_back(p.times[i]);
    sub.states.push_back(p.states[i]);
  }
  for (double d : {0.005, 0.02, 0.31}) {
    const auto full = first_sum_below(p, 1, d), coarse = first_sum_below(sub, 1, d);
    if (coarse.first_hit_time) {
      ASSERT_TRUE(full.first_hit_time);
      EXPECT_LE(*full.first_hit_time, *coarse.first_hit_time);
    }
  }
}

TEST(Sums, BottomAndTop) {
  const std::vector<double> x{0.1, 0.4, 0.8};
  EXPECT_DOUBLE_EQ(bottom_sum(x, 2), 0.5);
  EXPECT_DOUBLE_EQ(top_deficit(x, 2), 0.2 + 0.6);
}

TEST(ZetaEps, Examples) {
  ASSERT_TRUE(zeta_eps(constant({0.005, 0.008}), 0.01));
  EXPECT_EQ(*zeta_eps(constant({0.005, 0.008}), 0.01), 0.0);
  EXPECT_FALSE(zeta_eps(constant({0.005, 0.5}), 0.01));
  EXPECT_FALSE(zeta_eps(constant({0.3, 0.995}), 0.01));
}

TEST(ZetaEps, MonotoneInEps) {
  const auto p = fixture({{0.2, 0.5}, {0.05, 0.09}, {0.02, 0.03}, {0.004, 0.007}, {0.3, 0.6}});
  double prev = -1.0;
  for (double e : {0.001, 0.005, 0.01, 0.05, 0.1, 0.5}) {
    const auto t = zeta_eps(p, e);
    const double v = t ? *t : INFINITY;
    if (prev >= 0.0) {
      EXPECT_LE(v, prev) << e;
    }
    prev = v;
  }
}

TEST(ZetaEps, NeedsTwoParticles) {
  EXPECT_ERROR_KIND(zeta_eps(constant({0.5}), 0.01), ErrorKind::InvalidParams);
}

TEST(GapScans, Examples) {
  const auto g = min_gap_scan(constant({0.25, 0.5, 0.75}));
  EXPECT_EQ(g.min_gap, 0.25);
  EXPECT_TRUE(double_collision_scan(fixture({{0.2, 0.201, 0.601}, {0.3, 0.5, 0.7}}), 0.01).empty());
  const auto d = double_collision_scan(fixture({{0.3, 0.5, 0.7}, {0.001, 0.002, 0.999}}), 0.01);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], 1.0);
}

TEST(GapScans, LocatesClosestPair) {
  const auto g = min_gap_scan(fixture({{0.2, 0.5, 0.8}, {0.2, 0.3, 0.31}, {0.1, 0.5, 0.9}}));
  EXPECT_NEAR(g.min_gap, 0.01, 1e-15);
  EXPECT_EQ(g.time, 1.0);
  EXPECT_EQ(g.pair, 1u);
}
