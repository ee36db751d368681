#include <benchmark/benchmark.h>

#include "gmrbm/crossmatch.hpp"
#include "gmrbm/harness.hpp"
#include "gmrbm/matching.hpp"
#include "gmrbm/neuro.hpp"

using namespace gmrbm;

namespace {

DistanceMatrix random_distances(std::size_t n, std::uint64_t seed) {
  const RbmModel m = random_model(64, 16, 0.5, 0.25, seed);
  ChainSettings st;
  st.burn_in = 20;
  st.n_samples = n / 2;
  return pairwise_distances(run_chain(m, st, seed), run_chain(m, st, seed + 1));
}

void BM_OptimalMatching(benchmark::State& state) {
  const DistanceMatrix d = random_distances(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_matching(d, 7).total_cost);
}
BENCHMARK(BM_OptimalMatching)->Arg(20)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_GreedyMatching(benchmark::State& state) {
  const DistanceMatrix d = random_distances(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_matching(d, 7).total_cost);
}
BENCHMARK(BM_GreedyMatching)->Arg(20)->Arg(100)->Arg(200)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NullPmf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(null_pmf(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_NullPmf)->Arg(50)->Arg(1000);

void BM_IdealGibbsStep(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const RbmModel m = random_model(r, r / 2, 0.1, 0.1, 3);
  Rng rng(3);
  GibbsState s = initial_state(m, ChainSettings{}, rng);
  for (auto _ : state) s = gibbs_step(m, s, rng);
}
BENCHMARK(BM_IdealGibbsStep)->Arg(16)->Arg(784);

void BM_DigitalGibbsStep(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const RbmModel m = random_model(r, r / 2, 0.1, 0.1, 3);
  const DigitalSamplerConfig cfg = desk_calibrated_config();
  Rng rng(3);
  GibbsState s = initial_state(m, ChainSettings{}, rng);
  for (auto _ : state) s = digital_gibbs_step(m, s, cfg, rng);
}
BENCHMARK(BM_DigitalGibbsStep)->Arg(16)->Arg(784);

}  // namespace
BENCHMARK_MAIN();
