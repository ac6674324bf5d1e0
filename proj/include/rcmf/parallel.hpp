#pragma once

#include "rcmf/random.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcmf {

enum class Execution { Serial, Parallel };

/// Thread count used by `Execution::Parallel`; 0 means the OpenMP default.
void set_thread_count(int threads);
int thread_count();

/// Runs `body(rng, index)` for every replica index in [0, count) and collects
/// the results in index order. Replica k always sees make_stream(seed, k), so
/// the serial and parallel paths return identical vectors.
template <class Result, class Body>
std::vector<Result> run_replicas(std::size_t count, std::uint64_t seed, Body&& body,
                                 Execution exec = Execution::Parallel) {
  std::vector<Result> results(count);
  if (exec == Execution::Serial || count < 2) {
    for (std::size_t k = 0; k < count; ++k) {
      Rng rng = make_stream(seed, k);
      results[k] = body(rng, k);
    }
    return results;
  }
  const auto n = static_cast<std::int64_t>(count);
  const int threads = thread_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t k = 0; k < n; ++k) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(k));
    results[static_cast<std::size_t>(k)] = body(rng, static_cast<std::size_t>(k));
  }
  return results;
}

}  // namespace rcmf
