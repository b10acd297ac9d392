#include <benchmark/benchmark.h>

#include <random>

#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/random.hpp"
#include "flexfor/revol.hpp"
#include "flexfor/sampling.hpp"

using namespace flexfor;

static void BM_PowerFlow(benchmark::State& state) {
  const auto m = build_feeder(reference_feeder_spec(static_cast<int>(state.range(0))));
  std::vector<PowerInjection> inj;
  for (const auto& d : m.ders) inj.push_back({0.8 * d.p_inst_kw, 0.2 * d.s_max_kva});
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, inj));
}
BENCHMARK(BM_PowerFlow)->Arg(1)->Arg(3)->Arg(9)->Arg(27)->Unit(benchmark::kMicrosecond);

static void BM_DirichletShares(benchmark::State& state) {
  Rng rng(1);
  const std::vector<double> alpha(static_cast<std::size_t>(state.range(0)), 1.2);
  std::vector<double> x(alpha.size());
  for (auto _ : state) {
    dirichlet(rng, alpha, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_DirichletShares)->Arg(9)->Arg(27);

static void BM_TwoStageCloud(benchmark::State& state) {
  const auto m = build_feeder(reference_feeder_spec(9));
  DirichletConfig cfg;
  cfg.sample_size = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dirichlet_two_stage(m, cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TwoStageCloud)->Unit(benchmark::kMillisecond);

static void BM_ConvexHull(benchmark::State& state) {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(gen), u(gen)};
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
}
BENCHMARK(BM_ConvexHull)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

static void BM_Jaccard(benchmark::State& state) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> a(200), b(200);
  for (auto& p : a) p = {u(gen), u(gen)};
  for (auto& p : b) p = {u(gen) + 0.3, u(gen)};
  const auto ha = convex_hull(a), hb = convex_hull(b);
  for (auto _ : state) benchmark::DoNotOptimize(jaccard(ha, hb));
}
BENCHMARK(BM_Jaccard);

static void BM_RevolDirection(benchmark::State& state) {
  const auto m = build_feeder(reference_feeder_spec(3));
  RevolConfig cfg;
  cfg.max_epochs = 500;
  for (auto _ : state) benchmark::DoNotOptimize(run_direction(m, {1, 1}, cfg, 0));
}
BENCHMARK(BM_RevolDirection)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
