#pragma once

#include <cstdint>

namespace bifcurrent::par {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// path that produces byte-identical results; tests compare the two.
enum class Exec { Serial, Parallel };

int max_threads();

// n > 0 pins the OpenMP worker count; n <= 0 leaves the runtime default.
void set_threads(int n);

// Resolves a requested thread count against the BIFCURRENT_THREADS
// environment variable (request wins, 0 = auto) and applies it.
int resolve_threads(int requested);

// Bodies must write only to their own index's slot; the schedule then has no
// effect on results, and dynamic chunks absorb the heavy load imbalance of
// escape-time work.
template <class F>
void for_each_index(std::int64_t count, Exec exec, F&& body) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t i = 0; i < count; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) body(i);
  }
}

}  // namespace bifcurrent::par
