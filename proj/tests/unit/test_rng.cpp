#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "bjacobi/rng.hpp"

using namespace bjacobi;

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x64({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x16554d9eca36314cULL);
  EXPECT_EQ(out[1], 0xdb20fe9d672d0fdcULL);
  EXPECT_EQ(out[2], 0xd7e772cee186176bULL);
  EXPECT_EQ(out[3], 0x7e68b68aec7ba23bULL);
}

TEST(Philox, KnownAnswerOnes) {
  const std::uint64_t f = ~0ULL;
  const auto out = philox4x64({f, f, f, f}, {f, f});
  EXPECT_EQ(out[0], 0x87b092c3013fe90bULL);
  EXPECT_EQ(out[1], 0x438c3c67be8d0224ULL);
  EXPECT_EQ(out[2], 0x9cc7d7c69cd777b6ULL);
  EXPECT_EQ(out[3], 0xa09caebf594f0ba0ULL);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                               0x082efa98ec4e6c89ULL},
                              {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  EXPECT_EQ(out[0], 0xa528f45403e61d95ULL);
  EXPECT_EQ(out[1], 0x38c72dbd566e9788ULL);
  EXPECT_EQ(out[2], 0xa5a1610e72fd18b5ULL);
  EXPECT_EQ(out[3], 0x57bd43b5e52b7fe6ULL);
}

TEST(Uniforms, Ranges) {
  EXPECT_EQ(uniform_closed_open(0), 0.0);
  EXPECT_GT(uniform_open_closed(0), 0.0);
  EXPECT_EQ(uniform_open_closed(~0ULL), 1.0);
  EXPECT_LT(uniform_closed_open(~0ULL), 1.0);
}

TEST(NoiseSource, DeterministicAndKeyed) {
  const NoiseSource a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  EXPECT_EQ(a.normal(10, 1, 0, 0), b.normal(10, 1, 0, 0));
  EXPECT_NE(a.normal(10, 1, 0, 0), c.normal(10, 1, 0, 0));
  EXPECT_NE(a.normal(10, 1, 0, 0), d.normal(10, 1, 0, 0));
  EXPECT_NE(a.normal(10, 1, 0, 0), a.normal(11, 1, 0, 0));
  EXPECT_NE(a.normal(10, 1, 0, 0), a.normal(10, 1, 1, 0));
}

TEST(NoiseSource, BatchMatchesSingleDraws) {
  const NoiseSource s(1, 2);
  std::vector<double> batch(5);
  s.normals(3, 2, 9, batch);
  for (std::size_t c = 0; c < batch.size(); ++c) EXPECT_EQ(batch[c], s.normal(3, c, 2, 9));
}

TEST(NoiseSource, ZeroSource) {
  const auto z = NoiseSource::zero();
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.normal(1, 2, 3, 4), 0.0);
}

TEST(NoiseSource, StandardNormalMoments) {
  const NoiseSource s(42, 0);
  const int n = 200000;
  double sum = 0, sum2 = 0, sum4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(static_cast<std::uint64_t>(i), i % 2, 0, 0);
    sum += z;
    sum2 += z * z;
    sum4 += z * z * z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sum4 / n, 3.0, 4 * std::sqrt(96.0 / n));
}

TEST(RefineIncrement, SumMatchesToRounding) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  const double dt = 1e-3;
  for (int i = 0; i < 1000000; ++i) {
    const double dw = z(rng) * std::sqrt(dt);
    const auto [l, r] = refine_increment(dw, dt, z(rng));
    ASSERT_LE(std::abs(l + r - dw), std::numeric_limits<double>::epsilon() * std::max(std::abs(l), std::abs(r)));
  }
}

TEST(RefineIncrement, QuantizedSumIsExactAtEveryLevel) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z;
  const double dt = 1e-3;
  const int levels = 20;
  for (int i = 0; i < 20000; ++i) {
    double dw = quantize(z(rng) * std::sqrt(dt), bridge_quantum(dt, 0, levels));
    double h = dt;
    for (int level = 1; level <= levels; ++level) {
      const auto [l, r] = refine_increment(dw, h, z(rng), bridge_quantum(dt, level, levels));
      ASSERT_EQ(l + r, dw);
      ASSERT_EQ(r, dw - l);
      dw = l;
      h /= 2;
    }
  }
}

TEST(RefineIncrement, LeftHalfVariance) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  const double dt = 0.01;
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double dw = z(rng) * std::sqrt(dt);
    const double l = refine_increment(dw, dt, z(rng)).first;
    sum += l;
    sum2 += l * l;
  }
  const double var = sum2 / n - (sum / n) * (sum / n);
  const double se = std::sqrt(2.0 / n) * dt / 2;
  EXPECT_NEAR(var, dt / 2, 3 * se);
}

TEST(RefineIncrement, ZeroNormalSplitsEvenly) {
  const auto [l, r] = refine_increment(0.3, 0.01, 0.0);
  EXPECT_EQ(l, 0.15);
  EXPECT_EQ(r, 0.15);
}

TEST(BridgeQuantum, PowerOfTwo) {
  for (int level = 0; level <= 20; ++level) {
    const double q = bridge_quantum(1e-3, level, 20);
    int e = 0;
    EXPECT_EQ(std::frexp(q, &e), 0.5) << level;
  }
  EXPECT_EQ(quantize(0.3, 0.0), 0.3);
  EXPECT_EQ(quantize(0.3, 0.25), 0.25);
}
