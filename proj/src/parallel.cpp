#include "bifcurrent/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bifcurrent::par {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int resolve_threads(int requested) {
  if (requested <= 0) {
    if (const char* env = std::getenv("BIFCURRENT_THREADS")) {
      requested = std::atoi(env);
    }
  }
  set_threads(requested);
  return requested > 0 ? requested : max_threads();
}

}  // namespace bifcurrent::par
