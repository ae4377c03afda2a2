#include "graphforge/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace graphforge {

namespace {
int default_threads() {
  static const int value = omp_get_max_threads();
  return value;
}
}  // namespace

void set_thread_count(int threads) {
  const int base = default_threads();
  omp_set_num_threads(threads >= 1 ? threads : base);
}

int thread_count() { return omp_get_max_threads(); }

int thread_count_from_env() {
  const char* raw = std::getenv("GRAPHFORGE_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int v = std::stoi(raw);
    return v > 0 ? v : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace graphforge
