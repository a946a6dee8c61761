#include <benchmark/benchmark.h>

#include <vector>

#include "hitspec/discretize.hpp"
#include "hitspec/moments.hpp"
#include "hitspec/montecarlo.hpp"
#include "hitspec/spectral.hpp"
#include "hitspec/verify.hpp"

namespace {

using namespace hitspec;

void BM_Eigendecompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneratorMatrix gen = build_killed_generator(find_model("BM2").model, {0.0, 1.0}, n);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(gen));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneratorMatrix gen = build_killed_generator(find_model("BM2").model, {0.0, 1.0}, n);
  for (auto _ : state) benchmark::DoNotOptimize(generator_eigenvalues(gen));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond);

void BM_MomentRecursion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GeneratorMatrix gen = build_killed_generator(find_model("HT(4)").model, {-50.0, 50.0}, n);
  for (auto _ : state) benchmark::DoNotOptimize(moment_recursion(gen, 4));
}
BENCHMARK(BM_MomentRecursion)->RangeMultiplier(4)->Range(1000, 64000)->Unit(benchmark::kMicrosecond);

void BM_BuildGenerator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DiffusionModel model = find_model("HT(4)").model;
  for (auto _ : state) benchmark::DoNotOptimize(build_reflected_generator(model, {-50.0, 50.0}, n));
}
BENCHMARK(BM_BuildGenerator)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_HittingPaths(benchmark::State& state) {
  SimulationConfig config;
  config.model = find_model("BM2").model;
  config.step_time = 1e-4;
  config.paths = static_cast<std::size_t>(state.range(0));
  const Region region = Region::interval(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_hitting_moments(config, region, StartLaw::at(0.5), {1, 2}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HittingPaths)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NashWitnesses(benchmark::State& state) {
  const GeneratorMatrix gen = build_killed_generator(find_model("HT(4)").model, {-10.0, 10.0}, 1000);
  const SpectralDecomposition dec = eigendecompose(gen);
  const auto fs = random_bounded_functions(gen.nodes(), 100, 1);
  for (auto _ : state) {
    for (const auto& f : fs) benchmark::DoNotOptimize(nash_witness(spectral_weights(dec, f), 2.0));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_NashWitnesses)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
