#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "stratinfer/coordination.hpp"
#include "stratinfer/delaunay.hpp"
#include "stratinfer/simulate.hpp"
#include "stratinfer/support_qp.hpp"

using namespace stratinfer;

namespace {

DirectionSeries random_series(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  DirectionSeries s;
  for (std::size_t t = 0; t < n; ++t) s.push_back(DirectionDeg(u(rng)));
  return s;
}

void BM_SimFoll(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_series(static_cast<std::size_t>(state.range(0)), rng);
  const auto b = random_series(a.size(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sim_foll(a, b, 60));
}
BENCHMARK(BM_SimFoll)->Arg(120)->Arg(400);

void BM_Triangulate(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Vec2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(triangulate(pts));
}
BENCHMARK(BM_Triangulate)->Arg(20)->Arg(200);

void BM_SolveSupportQp(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-180.0, 180.0);
  PredictionMatrix m;
  for (std::size_t r = 0; r < 400; ++r) {
    m.push_back({DirectionDeg(u(rng)), DirectionDeg(u(rng)), DirectionDeg(u(rng))}, DirectionDeg(u(rng)),
                DirectionDeg(0.0), r + 1);
  }
  const QuadraticForm q = quadratic_form(m);
  for (auto _ : state) benchmark::DoNotOptimize(solve_support_qp(q, {}));
}
BENCHMARK(BM_SolveSupportQp);

void BM_Simulate(benchmark::State& state) {
  SimSpec spec;
  spec.model = static_cast<Regime>(state.range(0));
  for (auto _ : state) {
    ++spec.seed;
    benchmark::DoNotOptimize(simulate(spec));
  }
}
BENCHMARK(BM_Simulate)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
