#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rte/parallel.hpp"

using namespace rte;

namespace {

std::vector<double> run_kernel(std::int64_t n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t i) {
    double x = 0.25 + 1e-3 * static_cast<double>(i);
    out[static_cast<std::size_t>(i)] = std::sin(x) * std::exp(-x * x) + std::sqrt(x);
  });
  return out;
}

}  // namespace

TEST_CASE("execution mode is a process-wide switch") {
  Exec before = execution_mode();
  set_execution_mode(Exec::serial);
  CHECK(execution_mode() == Exec::serial);
  set_execution_mode(Exec::openmp);
  CHECK(execution_mode() == Exec::openmp);
  set_execution_mode(before);
}

TEST_CASE("serial and OpenMP modes produce bitwise identical results") {
  set_execution_mode(Exec::serial);
  auto serial = run_kernel(10007);

  set_execution_mode(Exec::openmp);
  auto parallel = run_kernel(10007);
  CHECK(serial == parallel);

#ifdef _OPENMP
  // oversubscribe to force a different iteration split
  int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  auto oversubscribed = run_kernel(10007);
  omp_set_num_threads(saved);
  CHECK(serial == oversubscribed);
#endif

  set_execution_mode(Exec::openmp);
}

TEST_CASE("empty and single-element ranges") {
  int hits = 0;
  parallel_for(0, [&](std::int64_t) { ++hits; });
  CHECK(hits == 0);
  parallel_for(1, [&](std::int64_t) { ++hits; });
  CHECK(hits == 1);
}
