#include "rte/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rte {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double compensated_dot(const std::vector<double>& a, const std::vector<double>& b) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

}  // namespace

GridSpec make_grid(int n_x, int n_d) {
  if (!is_pow2(n_x) || !is_pow2(n_d))
    throw std::invalid_argument("make_grid: n_x and n_d must be powers of two, got " +
                                std::to_string(n_x) + ", " + std::to_string(n_d));
  return GridSpec{n_x, n_d};
}

double inner_scalar(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_scalar: mismatched grids");
  double sx = a.grid.sx();
  return sx * sx * compensated_dot(a.v, b.v);
}

double inner_angular(const AngularField& a, const AngularField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_angular: mismatched grids");
  double sx = a.grid.sx();
  return sx * sx * (a.grid.delta() * compensated_dot(a.v, b.v));
}

double inner_boundary(const BoundaryData& a, const BoundaryData& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_boundary: mismatched grids");
  return a.grid.sx() * (a.grid.delta() * compensated_dot(a.v, b.v));
}

void apply_disk_support(ScalarField& f) {
  int n = f.grid.n_x;
  for (int iy = 0; iy < n; ++iy) {
    double y = f.grid.x(iy);
    for (int ix = 0; ix < n; ++ix) {
      double x = f.grid.x(ix);
      if (x * x + y * y >= 1.0) f.at(iy, ix) = 0.0;
    }
  }
  f.disk_supported = true;
}

double max_outside_disk(const ScalarField& f) {
  int n = f.grid.n_x;
  double worst = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    double y = f.grid.x(iy);
    for (int ix = 0; ix < n; ++ix) {
      double x = f.grid.x(ix);
      if (x * x + y * y >= 1.0) worst = std::max(worst, std::abs(f.at(iy, ix)));
    }
  }
  return worst;
}

bool has_non_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return true;
  return false;
}

}  // namespace rte
