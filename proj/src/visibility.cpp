#include "rte/visibility.hpp"

#include <cmath>
#include <stdexcept>

#include "rte/parallel.hpp"

namespace rte {

namespace {

double bilinear_slice(const AngularField& a, int id, double x, double y) {
  const GridSpec& g = a.grid;
  const double u = (x + 1.0) / g.sx() - 0.5;
  const double v = (y + 1.0) / g.sx() - 0.5;
  const int i0 = int(std::floor(u)), j0 = int(std::floor(v));
  const double fu = u - i0, fv = v - j0;
  double acc = 0.0;
  for (int dj = 0; dj < 2; ++dj)
    for (int di = 0; di < 2; ++di) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || i >= g.n_x || j < 0 || j >= g.n_x) continue;
      acc += (di ? fu : 1.0 - fu) * (dj ? fv : 1.0 - fv) * a.at(id, j, i);
    }
  return acc;
}

// exp of minus the sigma line integral from x to the disk exit along the
// direction at angle phi, trapezoid march
double march_attenuation(const AngularField& sigma, bool vacuum, double px,
                         double py, double phi, double step) {
  if (vacuum) return 1.0;
  const GridSpec& g = sigma.grid;
  const double tx = std::cos(phi), ty = std::sin(phi);
  const double dot = px * tx + py * ty;
  const double rad = dot * dot + 1.0 - (px * px + py * py);
  if (rad <= 0.0) return 1.0;
  const double tau = -dot + std::sqrt(rad);
  const int id =
      int((std::llround(phi / g.delta() - 0.5) % g.n_d + g.n_d) % g.n_d);
  const int n = std::max(1, int(std::ceil(tau / step)));
  const double h = tau / n;
  double acc = 0.0;
  double prev = bilinear_slice(sigma, id, px, py);
  for (int j = 1; j <= n; ++j) {
    const double cur =
        bilinear_slice(sigma, id, px + j * h * tx, py + j * h * ty);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return std::exp(-acc);
}

// one perpendicular direction's |E chi|^2 contribution
double direction_weight(const AngularField& sigma, bool vacuum,
                        const CutoffSpec& cutoff, double px, double py,
                        double phi, double step) {
  const double tx = std::cos(phi), ty = std::sin(phi);
  const double dot = px * tx + py * ty;
  const double rad = dot * dot + 1.0 - (px * px + py * py);
  if (rad <= 0.0) return 0.0;
  const double tau = -dot + std::sqrt(rad);
  const double ex = px + tau * tx, ey = py + tau * ty;
  const double chi = cutoff_chi(cutoff, std::atan2(ey, ex), phi);
  if (chi == 0.0) return 0.0;
  const double e = march_attenuation(sigma, vacuum, px, py, phi, step);
  return e * chi * e * chi;
}

double rho_at(const AngularField& sigma, bool vacuum, const CutoffSpec& cutoff,
              double px, double py, double xi_angle, double step) {
  double xi = std::fmod(xi_angle, kPi);
  if (xi < 0.0) xi += kPi;
  const double w1 = direction_weight(sigma, vacuum, cutoff, px, py,
                                     xi + 0.5 * kPi, step);
  const double w2 = direction_weight(sigma, vacuum, cutoff, px, py,
                                     xi - 0.5 * kPi, step);
  return kTwoPi * (w1 + w2);
}

}  // namespace

double symbol_rho(double px, double py, double xi_angle,
                  const MediumSpec& medium, const CutoffSpec& cutoff) {
  if (px * px + py * py >= 1.0)
    throw std::domain_error("symbol_rho: point must lie inside the unit disk");
  const TransportTables& tab = transport_tables(medium);
  return rho_at(medium.sigma, tab.vacuum, cutoff, px, py, xi_angle,
                0.25 * medium.sigma.grid.sx());
}

VisibilityMap visibility_map(const GridSpec& grid, const MediumSpec& medium,
                             const CutoffSpec& cutoff, int n_xi,
                             double threshold) {
  if (n_xi < 1)
    throw std::invalid_argument("visibility_map: n_xi must be positive");
  const TransportTables& tab = transport_tables(medium);
  VisibilityMap m;
  m.grid = grid;
  m.n_xi = n_xi;
  m.threshold = threshold;
  m.values.assign(std::size_t(n_xi) * grid.n_x * grid.n_x, 0.0);
  m.mask.assign(m.values.size(), 0);

  const double step = grid.sx();
  for (int k = 0; k < n_xi; ++k) {
    const double xi = m.xi(k);
    parallel_for(grid.n_x, [&](std::int64_t iy) {
      const double y = grid.x(int(iy));
      std::size_t base = (std::size_t(k) * grid.n_x + iy) * grid.n_x;
      for (int ix = 0; ix < grid.n_x; ++ix) {
        const double x = grid.x(ix);
        if (x * x + y * y >= 1.0) continue;
        const double rho =
            rho_at(medium.sigma, tab.vacuum, cutoff, x, y, xi, step);
        m.values[base + ix] = rho;
        m.mask[base + ix] = rho > threshold ? 1 : 0;
      }
    });
  }
  return m;
}

}  // namespace rte
