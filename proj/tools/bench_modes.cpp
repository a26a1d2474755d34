#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "rte/experiment.hpp"
#include "rte/parallel.hpp"
#include "rte/pipeline.hpp"
#include "rte/spectral.hpp"

using namespace rte;

// Times each kernel once per execution mode and checks that the OpenMP path
// reproduces the serial reference bitwise. Timings are wall clock over
// --reps repetitions of the same call; the first call per mode is a warmup
// so plan construction and table caching stay out of the numbers.

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Case {
  std::string name;
  std::vector<double> serial_out;
  std::vector<double> openmp_out;
  double serial_time = 0.0;
  double openmp_time = 0.0;
};

template <typename Fn>
void run_mode(Exec mode, int reps, Fn&& kernel, std::vector<double>& out,
              double& time) {
  set_execution_mode(mode);
  out = kernel();
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) out = kernel();
  time = seconds_since(t0) / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int n_x = 256, n_d = 128, reps = 3;
  for (int i = 1; i < argc; ++i) {
    auto next_int = [&](int& slot) {
      if (i + 1 < argc) slot = std::atoi(argv[++i]);
    };
    if (std::strcmp(argv[i], "--nx") == 0) next_int(n_x);
    else if (std::strcmp(argv[i], "--nd") == 0) next_int(n_d);
    else if (std::strcmp(argv[i], "--reps") == 0) next_int(reps);
    else {
      std::printf("usage: bench_modes [--nx N] [--nd N] [--reps N]\n");
      return 2;
    }
  }

  GridSpec g = make_grid(n_x, n_d);
  MediumSpec medium = example_medium(g);
  ScalarField f = configured_phantom(ExperimentConfig{}, g);

  ScalarField bump(g);
  for (int iy = 0; iy < g.n_x; ++iy)
    for (int ix = 0; ix < g.n_x; ++ix) {
      const double x = g.x(ix) - 0.1, y = g.x(iy) + 0.2;
      bump.at(iy, ix) = std::exp(-(x * x + y * y) / 0.08);
    }
  apply_disk_support(bump);
  AngularField u(g);
  for (int id = 0; id < g.n_d; ++id)
    std::memcpy(u.slice(id), bump.v.data(), bump.v.size() * sizeof(double));

  std::vector<Case> cases;
  cases.push_back({"rotate", {}, {}, 0.0, 0.0});
  cases.push_back({"apply_K", {}, {}, 0.0, 0.0});
  cases.push_back({"apply_T1_inv", {}, {}, 0.0, 0.0});
  cases.push_back({"attenuation_E", {}, {}, 0.0, 0.0});
  cases.push_back({"forward_XV (m1=2)", {}, {}, 0.0, 0.0});

  const auto kernels = [&](int which) {
    return [&, which]() -> std::vector<double> {
      switch (which) {
        case 0: return rotate(bump, 0.37).v;
        case 1: return apply_K(u, medium).v;
        case 2: return apply_T1_inv(u, medium).v;
        case 3: return attenuation_E(medium).v;
        default:
          return forward_XV(f, medium, full_data_cutoff(), 2).data.v;
      }
    };
  };

  const Exec initial = execution_mode();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    run_mode(Exec::serial, reps, kernels(int(i)), cases[i].serial_out,
             cases[i].serial_time);
    run_mode(Exec::openmp, reps, kernels(int(i)), cases[i].openmp_out,
             cases[i].openmp_time);
  }
  set_execution_mode(initial);

  std::printf("grid %dx%d, %d directions, %d reps\n", n_x, n_x, n_d, reps);
  std::printf("%-20s %12s %12s %9s  %s\n", "kernel", "serial [s]", "openmp [s]",
              "speedup", "outputs");
  int mismatches = 0;
  for (const Case& c : cases) {
    const bool same =
        c.serial_out.size() == c.openmp_out.size() &&
        std::memcmp(c.serial_out.data(), c.openmp_out.data(),
                    c.serial_out.size() * sizeof(double)) == 0;
    if (!same) ++mismatches;
    std::printf("%-20s %12.4f %12.4f %8.2fx  %s\n", c.name.c_str(),
                c.serial_time, c.openmp_time, c.serial_time / c.openmp_time,
                same ? "bitwise equal" : "MISMATCH");
  }
  return mismatches;
}
