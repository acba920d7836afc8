#include "nvfix/parallel.hpp"

#include <atomic>

#include <omp.h>

namespace nvfix {

namespace {
std::atomic<int> limit{0};
}

void set_thread_limit(int threads) { limit = threads < 0 ? 0 : threads; }

int thread_limit() { return limit.load(); }

int worker_count() {
  const int cap = limit.load();
  return cap > 0 ? cap : omp_get_max_threads();
}

} // namespace nvfix
