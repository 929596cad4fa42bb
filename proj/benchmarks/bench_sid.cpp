#include <benchmark/benchmark.h>

#include "decolab/sid.hpp"

namespace {

using namespace decolab;

void BM_SampleKernel(benchmark::State& state) {
  const std::size_t n_omega = std::size_t(state.range(0));
  const LorentzianKernel family{10.0, 0.5, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_kernel(family, n_omega, 20.0, 1.0));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(n_omega) * std::int64_t(n_omega));
}
BENCHMARK(BM_SampleKernel)->Arg(128)->Arg(512)->Arg(2048);

void BM_ExpectationAt(benchmark::State& state) {
  const std::size_t n_omega = std::size_t(state.range(0));
  const SidKernel kernel = sample_kernel(LorentzianKernel{10.0, 0.5, 1.0},
                                         n_omega, 20.0, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.003;
    benchmark::DoNotOptimize(expectation_at(kernel, t));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(n_omega));
}
BENCHMARK(BM_ExpectationAt)->Arg(128)->Arg(512)->Arg(2048);

void BM_FitKernelDecay(benchmark::State& state) {
  const SidKernel kernel = sample_kernel(LorentzianKernel{10.0, 0.2, 1.0},
                                         std::size_t(state.range(0)), 20.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_kernel_decay(kernel));
  }
}
BENCHMARK(BM_FitKernelDecay)->Arg(256)->Arg(512);

}  // namespace
