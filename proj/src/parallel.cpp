#include "rte/parallel.hpp"

#include <atomic>

namespace rte {

namespace {
std::atomic<Exec> g_mode{Exec::openmp};
}

Exec execution_mode() { return g_mode.load(std::memory_order_relaxed); }

void set_execution_mode(Exec m) { g_mode.store(m, std::memory_order_relaxed); }

}  // namespace rte
