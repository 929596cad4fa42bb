#include <benchmark/benchmark.h>

#include "decolab/model.hpp"
#include "decolab/oracle.hpp"

namespace {

using namespace decolab;

void BM_Evolve(benchmark::State& state) {
  const std::size_t n_env = std::size_t(state.range(0));
  const SpinBathConfig config = sample_spin_bath_config(n_env, 7, 1.0);
  const FullState initial = build_initial(config);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.01;
    benchmark::DoNotOptimize(evolve(initial, config, t));
  }
  // One amplitude per basis state of the joint system.
  state.SetItemsProcessed(std::int64_t(state.iterations()) << (n_env + 1));
}
BENCHMARK(BM_Evolve)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_DenseExpectation(benchmark::State& state) {
  const std::size_t n_env = std::size_t(state.range(0));
  const SpinBathConfig config = sample_spin_bath_config(n_env, 7, 1.0);
  const FullState evolved = evolve(build_initial(config), config, 0.7);
  const HermitianBlock2 system{0.5, -0.5, Complex{0.2, 0.1}};
  const HermitianBlock2 env{1.0, 0.8, Complex{0.05, 0.0}};
  const ObservableSpec obs =
      make_full_observable(system, std::vector<HermitianBlock2>(n_env, env));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(evolved, obs));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) << (n_env + 1));
}
BENCHMARK(BM_DenseExpectation)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_PartialTrace(benchmark::State& state) {
  const std::size_t n_env = std::size_t(state.range(0));
  const SpinBathConfig config = sample_spin_bath_config(n_env, 7, 1.0);
  const FullState evolved = evolve(build_initial(config), config, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(evolved));
  }
}
BENCHMARK(BM_PartialTrace)->Arg(8)->Arg(16);

}  // namespace
