#include "monoscat/threads.hpp"

#include <cstdlib>
#include <omp.h>

namespace monoscat {

namespace {
int g_threads = 0;  // 0 = not set explicitly
}

int thread_count() {
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("MONOSCAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

void set_thread_count(int n) { g_threads = n > 0 ? n : 0; }

} // namespace monoscat
