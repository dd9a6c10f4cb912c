// Monte Carlo examples run at their full sample sizes.

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "bjacobi/experiments.hpp"
#include "bjacobi/parallel.hpp"

using namespace bjacobi;

namespace {

ExperimentConfig base(ModelParams m, double T, std::size_t paths, double dt) {
  ExperimentConfig c;
  c.params = m;
  c.integrator.horizon_T = T;
  c.integrator.dt = dt;
  c.n_paths = paths;
  c.seed = 2024;
  return c;
}

}  // namespace

TEST(MonteCarlo, JacobiAtCriticalDimensionsStaysInside) {
  IntegratorConfig cfg;
  cfg.scheme = Scheme::EMPhi;
  cfg.dt = 1e-4;
  cfg.horizon_T = 10.0;
  cfg.record_stride = static_cast<int>(cfg.steps());
  const std::size_t paths = 1000;
  std::vector<double> minima(paths);
  const JacobiModel model({2.0, 2.0});
  parallel_for(paths, 0, [&](std::size_t i) {
    double lo = 1.0;
    simulate_path(model, cfg, {Coord::Reference, {0.5}}, NoiseSource(77, i),
                  [&](const StepView& v) {
                    lo = std::min({lo, v.states[0][0], 1.0 - v.states[0][0]});
                    return true;
                  });
    minima[i] = lo;
  });
  const auto inside = std::count_if(minima.begin(), minima.end(), [](double m) { return m > 0.0; });
  EXPECT_GE(static_cast<double>(inside) / paths, 0.99);
}

TEST(MonteCarlo, PhiAndLambdaAgreeInLaw) {
  for (double dt : {2e-4, 1e-4}) {
    const auto r = coordinate_consistency_experiment(base({1, 3.0, 3.0, 1.0}, 1.0, 10000, dt));
    for (const auto& s : r.coordinates) {
      EXPECT_LT(std::abs(s.z_mean), 4.0) << dt;
      EXPECT_LT(std::abs(s.z_var), 4.0) << dt;
    }
  }
}

TEST(MonteCarlo, SmallBetaCollidesWithBottomEdge) {
  auto c = base({2, 3.0, 3.0, 0.25}, 50.0, 1000, 1e-3);
  c.k = 1;
  c.delta = 1e-4;
  c.stop_at_event = true;
  const auto r = no_collision_check(c);
  EXPECT_FALSE(r.threshold.no_collision);
  EXPECT_GE(r.flagged_fraction.value, 0.5);
}
