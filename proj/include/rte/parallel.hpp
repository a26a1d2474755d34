#pragma once

#include <cstdint>

namespace rte {

// Global execution mode. Every kernel is written once against parallel_for
// and dispatched either serially or through OpenMP; the serial path is the
// reference the OpenMP path is tested against.
enum class Exec { serial, openmp };

Exec execution_mode();
void set_execution_mode(Exec m);

// Static-schedule loop over [0, n). Bodies must write disjoint outputs and
// perform no cross-iteration reductions; results are then bitwise identical
// across modes, schedules and thread counts.
template <class F>
void parallel_for(std::int64_t n, F&& body) {
  if (execution_mode() == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace rte
