#include <vector>

#include <benchmark/benchmark.h>

#include "bjacobi/integrate.hpp"
#include "bjacobi/model.hpp"
#include "bjacobi/rng.hpp"

using namespace bjacobi;

namespace {

std::vector<double> spaced(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = (i + 1.0) / (n + 1);
  return x;
}

void BM_LambdaDrift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams m{n, n + 2.0, n + 2.0, 1.0};
  const auto x = spaced(n);
  std::vector<double> out(n);
  for (auto _ : state) {
    kernels::lambda_drift(m, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LambdaDrift)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_PhiDrift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ModelParams m{n, n + 2.0, n + 2.0, 1.0};
  auto x = spaced(n);
  for (auto& v : x) v *= kHalfPi;
  std::vector<double> out(n);
  for (auto _ : state) {
    kernels::phi_drift(m, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PhiDrift)->Arg(4)->Arg(64);

void BM_Normals(benchmark::State& state) {
  const NoiseSource src(1, 2);
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  std::uint64_t step = 0;
  for (auto _ : state) {
    src.normals(step++, 0, 0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Normals)->Arg(2)->Arg(64);

void BM_LambdaPath(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LambdaModel model({n, n + 2.0, n + 2.0, 1.0});
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon_T = 1.0;
  cfg.record_stride = static_cast<int>(cfg.steps());
  std::uint64_t id = 0;
  for (auto _ : state) {
    auto p = simulate_path(model, cfg, {Coord::Lambda, spaced(n)}, NoiseSource(9, id++));
    benchmark::DoNotOptimize(p.states.back().values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.steps()));
}
BENCHMARK(BM_LambdaPath)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
