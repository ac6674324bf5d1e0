#include "rcmf/parallel.hpp"

namespace rcmf {

namespace {
int g_threads = 0;
}  // namespace

void set_thread_count(int threads) { g_threads = threads < 0 ? 0 : threads; }

int thread_count() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rcmf
