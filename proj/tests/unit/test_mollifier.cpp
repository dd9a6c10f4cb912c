#include <cmath>

#include <gtest/gtest.h>

#include "bjacobi/mollifier.hpp"
#include "oracles.hpp"

using namespace bjacobi;

namespace {

double arcsin_sq(double x) {
  const double u = std::asin(std::sqrt(x));
  return u * u;
}

}  // namespace

TEST(Mollifier, ArcsineBranchValue) {
  EXPECT_NEAR(mollified_map({}, 0.25).f, (kPi / 6) * (kPi / 6), 1e-15);
}

TEST(Mollifier, AffineBranchAtOne) { EXPECT_EQ(mollified_map({}, 1.0).f, 1.0); }

TEST(Mollifier, BranchesAreExact) {
  const Mollifier f;
  for (int i = 0; i <= 5000; ++i) {
    const double x = i * 1e-4;
    EXPECT_EQ(f(x).f, arcsin_sq(x)) << x;
  }
  for (int i = 5625; i <= 10000; ++i) {
    const double x = i * 1e-4;
    EXPECT_EQ(f(x).f, x / 10 + 9.0 / 10) << x;
  }
}

TEST(Mollifier, StrictlyIncreasingOnGrid) {
  const Mollifier f;
  double prev = f(0.0).f;
  for (int i = 1; i <= 10000; ++i) {
    const auto v = f(i * 1e-4);
    EXPECT_GT(v.f, prev) << i;
    EXPECT_TRUE(std::isfinite(v.df) && std::isfinite(v.d2f)) << i;
    prev = v.f;
  }
}

TEST(Mollifier, SecondDerivativeContinuousAtGluePoints) {
  const Mollifier f;
  const double s = f.params().s, e = f.params().s + f.params().eps_s;
  for (double glue : {s, e}) {
    const double left = f(glue - 1e-8).d2f;
    const double right = f(glue + 1e-8).d2f;
    EXPECT_LE(std::abs(left - right), 1e-6) << glue;
  }
}

TEST(Mollifier, DerivativesMatchFiniteDifferences) {
  const Mollifier f;
  const double h = 1e-6;
  for (double x = 0.505; x < 0.56; x += 0.005) {
    const auto v = f(x);
    EXPECT_NEAR(v.df, (f(x + h).f - f(x - h).f) / (2 * h), 1e-6) << x;
    EXPECT_NEAR(v.d2f, (f(x + h).df - f(x - h).df) / (2 * h), 1e-4 * std::max(1.0, std::abs(v.d2f)))
        << x;
  }
}

TEST(Mollifier, BlendRunsFromOneToZero) {
  const Mollifier f;
  EXPECT_EQ(f.blend(0.5), 1.0);
  EXPECT_EQ(f.blend(0.5625), 0.0);
  EXPECT_NEAR(f.blend(0.53125), 0.5, 1e-12);
}

TEST(Mollifier, RejectsOutsideUnitInterval) {
  const Mollifier f;
  EXPECT_ERROR_KIND(f(-0.1), ErrorKind::OutOfRange);
  EXPECT_ERROR_KIND(f(1.5), ErrorKind::OutOfRange);
  EXPECT_ERROR_KIND(Mollifier({0.9, 0.2}), ErrorKind::InvalidParams);
}

TEST(ArcsinSquared, SeriesMatchesClosedForm) {
  for (double x = 0.01; x < 0.1; x += 0.01) {
    const auto v = arcsin_squared(x);
    const double u = std::asin(std::sqrt(x)), r = x * (1 - x);
    EXPECT_NEAR(v.df, u / std::sqrt(r), 1e-12);
    EXPECT_NEAR(v.d2f, 0.5 / r - u * (1 - 2 * x) / (2 * r * std::sqrt(r)), 1e-10);
  }
  EXPECT_EQ(arcsin_squared(0.0).f, 0.0);
  EXPECT_EQ(arcsin_squared(0.0).df, 1.0);
  EXPECT_NEAR(arcsin_squared(0.0).d2f, 2.0 / 3.0, 1e-15);
}
