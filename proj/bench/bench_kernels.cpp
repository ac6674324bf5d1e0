// Serial references against the OpenMP kernels.

#include "rcmf/cm_dynamics.hpp"
#include "rcmf/exact_chain.hpp"
#include "rcmf/parallel.hpp"
#include "rcmf/percolation.hpp"

#include <benchmark/benchmark.h>

using namespace rcmf;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_CmReplicas(benchmark::State& state) {
  const ModelParams params(20000, 1.5, 1.5);
  for (auto _ : state) {
    auto out = run_replicas<std::int64_t>(
        8, 1,
        [&](Rng& rng, std::size_t) {
          auto s = ComponentState::full(params.n());
          StepTrace trace;
          for (int t = 0; t < 20; ++t) {
            cm_update(s, params, rng, trace, {}, false);
          }
          return static_cast<std::int64_t>(s.count());
        },
        mode(state));
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_CmReplicas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PercolationReplicas(benchmark::State& state) {
  for (auto _ : state) {
    auto out = run_replicas<std::size_t>(
        16, 2, [](Rng& rng, std::size_t) { return sample_components(100000, 1e-5, rng, false).sizes.size(); },
        mode(state));
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_PercolationReplicas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExactCm(benchmark::State& state) {
  for (auto _ : state) {
    auto chain = cm_matrix_exact(4, 0.4, 2.5, false, mode(state));
    benchmark::DoNotOptimize(chain.matrix.data());
  }
}
BENCHMARK(BM_ExactCm)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ExactGlauber(benchmark::State& state) {
  for (auto _ : state) {
    auto chain = glauber_matrix_exact(4, 0.4, 2.5, mode(state));
    benchmark::DoNotOptimize(chain.matrix.data());
  }
}
BENCHMARK(BM_ExactGlauber)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
