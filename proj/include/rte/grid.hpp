#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace rte {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Midpoint discretization of the square [-1,1]^2 and of the direction circle.
// Spatial nodes x_i = -1 + (i + 1/2) s_x and angles eta_i = (i + 1/2) delta,
// both 0-based, so nodes never land on cell edges or on eta = 0.
struct GridSpec {
  int n_x = 0;  // samples per spatial axis
  int n_d = 0;  // direction count

  double sx() const { return 2.0 / n_x; }
  double delta() const { return kTwoPi / n_d; }
  double x(int i) const { return -1.0 + (i + 0.5) * sx(); }
  double eta(int i) const { return (i + 0.5) * delta(); }

  bool operator==(const GridSpec&) const = default;
};

// Builds a grid, checking that both counts are powers of two. Power-of-two
// counts make s_x an exact power of two and delta * n_d exactly 2*pi in
// floating point; the exact-identity contracts and the FFT sizes rely on it.
GridSpec make_grid(int n_x, int n_d);

// Real samples on the square. Row index is the y coordinate, column index x;
// entry (iy, ix) sits at (x(ix), x(iy)). disk_supported marks fields that are
// zero outside the closed unit disk (sources, medium coefficients);
// support_warning is set by rotate() when an input violates that premise.
struct ScalarField {
  GridSpec grid;
  std::vector<double> v;
  bool disk_supported = false;
  bool support_warning = false;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g)
      : grid(g), v(static_cast<std::size_t>(g.n_x) * g.n_x, 0.0) {}

  double& at(int iy, int ix) { return v[static_cast<std::size_t>(iy) * grid.n_x + ix]; }
  double at(int iy, int ix) const { return v[static_cast<std::size_t>(iy) * grid.n_x + ix]; }
};

// Real samples on square x directions. Stored direction-major: slice id is a
// contiguous n_x*n_x image laid out like ScalarField.
struct AngularField {
  GridSpec grid;
  std::vector<double> v;

  AngularField() = default;
  explicit AngularField(const GridSpec& g)
      : grid(g), v(static_cast<std::size_t>(g.n_d) * g.n_x * g.n_x, 0.0) {}

  double* slice(int id) { return v.data() + static_cast<std::size_t>(id) * grid.n_x * grid.n_x; }
  const double* slice(int id) const {
    return v.data() + static_cast<std::size_t>(id) * grid.n_x * grid.n_x;
  }
  double& at(int id, int iy, int ix) {
    return v[(static_cast<std::size_t>(id) * grid.n_x + iy) * grid.n_x + ix];
  }
  double at(int id, int iy, int ix) const {
    return v[(static_cast<std::size_t>(id) * grid.n_x + iy) * grid.n_x + ix];
  }
};

// Outgoing data: entry (id, j) is the outflow value for direction eta_id at
// perpendicular chord coordinate y_j. Entries with |y_j| >= 1 - s_x/2 are
// kept at zero (rays tangent to the disk).
struct BoundaryData {
  GridSpec grid;
  std::vector<double> v;

  BoundaryData() = default;
  explicit BoundaryData(const GridSpec& g)
      : grid(g), v(static_cast<std::size_t>(g.n_d) * g.n_x, 0.0) {}

  double& at(int id, int j) { return v[static_cast<std::size_t>(id) * grid.n_x + j]; }
  double at(int id, int j) const { return v[static_cast<std::size_t>(id) * grid.n_x + j]; }
};

// Neumaier-compensated accumulator. The adjointness contracts ask for 1e-12
// relative agreement between sums of ~1e7 terms, which plain left-to-right
// summation does not reliably deliver.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Discrete pairings. Scaling is applied as scale * (compensated sum) with the
// angular weight delta folded in first, so the exact-identity examples
// (power-of-two cancellations) hold bitwise.
double inner_scalar(const ScalarField& a, const ScalarField& b);    // s_x^2 * sum
double inner_angular(const AngularField& a, const AngularField& b); // s_x^2 * delta * sum
double inner_boundary(const BoundaryData& a, const BoundaryData& b); // s_x * delta * sum

// Zeroes entries outside the closed unit disk and sets the support flag.
void apply_disk_support(ScalarField& f);

// Largest |value| at grid points with x^2 + y^2 >= 1.
double max_outside_disk(const ScalarField& f);

// True if any entry is NaN or infinite.
bool has_non_finite(const std::vector<double>& v);

}  // namespace rte
