#include "rte/scene.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace rte {

namespace {

double element_reach(PhantomSpec::Kind kind, const PhantomElement& e) {
  const double rho = std::hypot(e.x0, e.y0);
  switch (kind) {
    case PhantomSpec::Kind::disk_bumps:
      return rho + e.r;
    case PhantomSpec::Kind::rect_bumps:
      return std::hypot(std::abs(e.x0) + e.r, std::abs(e.y0) + e.r0);
    case PhantomSpec::Kind::spiral_bumps:
      return rho + std::max(e.r, e.r0);
  }
  return 2.0;
}

double element_value(PhantomSpec::Kind kind, const PhantomElement& e,
                     double x, double y) {
  const double dx = x - e.x0;
  const double dy = y - e.y0;
  switch (kind) {
    case PhantomSpec::Kind::disk_bumps:
      return dx * dx + dy * dy <= e.r * e.r ? e.amplitude : 0.0;
    case PhantomSpec::Kind::rect_bumps:
      return std::abs(dx) <= e.r && std::abs(dy) <= e.r0 ? e.amplitude : 0.0;
    case PhantomSpec::Kind::spiral_bumps: {
      const double rad =
          1.0 - dx * dx / (e.r * e.r) - dy * dy / (e.r0 * e.r0);
      return rad > 0.0 ? e.amplitude * std::sqrt(rad) : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

ScalarField make_phantom(const PhantomSpec& spec, const GridSpec& grid) {
  for (const PhantomElement& e : spec.elements) {
    if (!(e.r > 0.0) || !(e.r0 > 0.0) || !std::isfinite(e.amplitude))
      throw std::invalid_argument("make_phantom: degenerate element");
    if (element_reach(spec.kind, e) > 1.0)
      throw std::invalid_argument("make_phantom: element escapes the unit disk");
  }
  ScalarField f(grid);
  for (int iy = 0; iy < grid.n_x; ++iy) {
    const double y = grid.x(iy);
    for (int ix = 0; ix < grid.n_x; ++ix) {
      const double x = grid.x(ix);
      double s = 0.0;
      for (const PhantomElement& e : spec.elements)
        s += element_value(spec.kind, e, x, y);
      f.at(iy, ix) = s;
    }
  }
  return f;
}

PhantomSpec disk_phantom() {
  PhantomSpec s;
  s.kind = PhantomSpec::Kind::disk_bumps;
  s.elements = {{1.0, -0.35, 0.25, 0.20, 0.20},
                {1.0, 0.35, 0.40, 0.15, 0.15},
                {1.0, 0.25, -0.35, 0.12, 0.12},
                {1.0, -0.25, -0.40, 0.08, 0.08}};
  return s;
}

PhantomSpec rect_phantom() {
  PhantomSpec s;
  s.kind = PhantomSpec::Kind::rect_bumps;
  s.elements = {{1.0, -0.30, -0.25, 0.20, 0.12},
                {1.0, 0.30, 0.25, 0.12, 0.20},
                {1.0, 0.05, -0.45, 0.10, 0.06}};
  return s;
}

PhantomSpec spiral_phantom() {
  PhantomSpec s;
  s.kind = PhantomSpec::Kind::spiral_bumps;
  const double amp[6] = {0.5, 1.0, 0.3, 0.3, 0.4, 0.3};
  const double rad[6] = {0.2, 0.15, 0.1, 0.1, 0.07, 0.03};
  for (int k = 0; k < 6; ++k) {
    const double rho = 0.25 + 0.09 * k;
    const double phi = k * (kTwoPi / 6.0);
    s.elements.push_back(
        {amp[k], rho * std::cos(phi), rho * std::sin(phi), rad[k], rad[k]});
  }
  return s;
}

double henyey_greenstein(double cos_phi, double g) {
  if (!(std::abs(g) < 1.0))
    throw std::domain_error("henyey_greenstein: |g| must be < 1");
  return (1.0 - g * g) / (kTwoPi * (1.0 + g * g - 2.0 * g * cos_phi));
}

MediumSpec example_medium(const GridSpec& grid) {
  MediumSpec m;
  m.sigma = AngularField(grid);
  ScalarField spatial(grid);
  for (int iy = 0; iy < grid.n_x; ++iy) {
    const double y = grid.x(iy);
    for (int ix = 0; ix < grid.n_x; ++ix) {
      const double x = grid.x(ix);
      if (x * x + y * y > 1.0) continue;
      const double c = std::cos(x * y);
      const double sn = std::sin(x * y);
      spatial.at(iy, ix) = 0.05 + sn * sn;
      for (int id = 0; id < grid.n_d; ++id) {
        const double se = std::sin(grid.eta(id));
        m.sigma.at(id, iy, ix) = 0.5 * (0.05 + c * c) * se * se;
      }
    }
  }
  m.kernel = factored_kernel(
      std::move(spatial), [](double c) { return henyey_greenstein(c, 0.85); });
  return m;
}

MediumSpec constant_medium(const GridSpec& grid, double c) {
  MediumSpec m;
  m.sigma = AngularField(grid);
  for (int iy = 0; iy < grid.n_x; ++iy) {
    const double y = grid.x(iy);
    for (int ix = 0; ix < grid.n_x; ++ix) {
      const double x = grid.x(ix);
      if (x * x + y * y > 1.0) continue;
      for (int id = 0; id < grid.n_d; ++id) m.sigma.at(id, iy, ix) = c;
    }
  }
  m.kernel = zero_kernel();
  return m;
}

BoundaryData add_noise(const BoundaryData& b, const NoiseSpec& spec) {
  if (!(spec.mu >= 0.0))
    throw std::invalid_argument("add_noise: mu must be nonnegative");
  BoundaryData out = b;
  if (spec.mu == 0.0) return out;

  const GridSpec& g = b.grid;
  std::mt19937_64 gen(spec.seed);
  const double scale = 0x1.0p-53;
  std::vector<double> w(g.n_x);
  for (int id = 0; id < g.n_d; ++id) {
    for (int j = 0; j + 1 < g.n_x; j += 2) {
      const double u1 = double(gen() >> 11) * scale;
      const double u2 = double(gen() >> 11) * scale;
      const double m = std::sqrt(-2.0 * std::log(1.0 - u1));
      w[j] = m * std::cos(kTwoPi * u2);
      w[j + 1] = m * std::sin(kTwoPi * u2);
    }
    double vn = 0.0, wn = 0.0;
    for (int j = 0; j < g.n_x; ++j) {
      vn += b.at(id, j) * b.at(id, j);
      wn += w[j] * w[j];
    }
    if (vn == 0.0 || wn == 0.0) continue;
    const double a = spec.mu * std::sqrt(vn / wn);
    for (int j = 0; j < g.n_x; ++j) out.at(id, j) += a * w[j];
  }
  return out;
}

}  // namespace rte
