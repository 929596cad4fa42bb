#include <benchmark/benchmark.h>

#include "decolab/analytic.hpp"
#include "decolab/model.hpp"

namespace {

using namespace decolab;

void BM_OverlapR(benchmark::State& state) {
  const std::size_t n_env = std::size_t(state.range(0));
  const SpinBathConfig config = sample_spin_bath_config(n_env, 7, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(overlap_r(config, t));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(n_env));
}
BENCHMARK(BM_OverlapR)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExpectationFull(benchmark::State& state) {
  const std::size_t n_env = std::size_t(state.range(0));
  const SpinBathConfig config = sample_spin_bath_config(n_env, 7, 1.0);
  const HermitianBlock2 system{0.5, -0.5, Complex{0.2, 0.1}};
  const HermitianBlock2 env{1.0, 0.8, Complex{0.05, 0.0}};
  const ObservableSpec obs =
      make_full_observable(system, std::vector<HermitianBlock2>(n_env, env));
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(expectation_full(config, obs, t));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(n_env));
}
BENCHMARK(BM_ExpectationFull)->Arg(10)->Arg(100)->Arg(1000);

void BM_Purity(benchmark::State& state) {
  const SpinBathConfig config = sample_spin_bath_config(std::size_t(state.range(0)), 7, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(purity(config, t));
  }
}
BENCHMARK(BM_Purity)->Arg(10)->Arg(1000);

}  // namespace
