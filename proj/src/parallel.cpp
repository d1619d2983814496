#include "bizeta/parallel.hpp"

#include <omp.h>

#include <atomic>

namespace bizeta {

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int n) { g_threads = n > 0 ? n : 0; }

int num_threads() {
  int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
}

}  // namespace bizeta
