#include "mal/limit_laws.hpp"
#include "mal/montecarlo.hpp"
#include "mal/singular.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

namespace {

void BM_SolvePk(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mal::solve_pk(k));
}
BENCHMARK(BM_SolvePk)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

void BM_ChiSqDiffCdf(benchmark::State& state) {
  const auto law = mal::make_chisq_law(2.1, 2.1, mal::Statistic::N, mal::Orientation::MuMinusM);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mal::law_cdf(law, x));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_ChiSqDiffCdf);

void BM_KsDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (double& x : xs) x = gauss(rng);
  const auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  for (auto _ : state) benchmark::DoNotOptimize(mal::ks_distance(xs, cdf));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KsDistance)->Arg(20000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_Replications(benchmark::State& state) {
  mal::SimulationConfig c;
  c.k = 3;
  c.n = static_cast<std::size_t>(state.range(0));
  c.reps = 1000;
  c.keep_sample = false;
  c.workers = 1;
  const mal::DistSpec spec = mal::SingularSpec{3, mal::SingularVariant::Symmetric};
  for (auto _ : state) benchmark::DoNotOptimize(mal::mc_scaled_statistic(spec, c));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Replications)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
