#pragma once

#include <cstdint>
#include <vector>

#include "rte/grid.hpp"
#include "rte/transport.hpp"

namespace rte {

// Per-pixel tabulation of the imaging operator's symbol over n_xi covector
// angles xi_k = k pi / n_xi (antipodal covectors are identified). mask marks
// where the symbol clears the threshold, i.e. where an edge with that
// normal direction survives in the reconstructed image.
struct VisibilityMap {
  GridSpec grid{};
  int n_xi = 0;
  double threshold = 0.0;
  std::vector<double> values;        // [k][iy][ix]
  std::vector<std::uint8_t> mask;    // values > threshold

  double xi(int k) const { return k * kPi / n_xi; }
  double value(int k, int iy, int ix) const {
    return values[(std::size_t(k) * grid.n_x + iy) * grid.n_x + ix];
  }
  bool visible(int k, int iy, int ix) const {
    return mask[(std::size_t(k) * grid.n_x + iy) * grid.n_x + ix] != 0;
  }
};

// Symbol of the imaging operator at one covector: 2 pi times the summed
// squares of E * chi^# over the two ray directions perpendicular to xi.
// chi^# is evaluated exactly at the ray's disk exit; E comes from a direct
// quarter-cell ray march (nearest direction slice, bilinear in space), so
// off-grid covector angles carry no rotation artifacts. The covector angle
// is reduced mod pi first, making rho(x, xi) == rho(x, -xi) bitwise.
// Requires |x| < 1.
double symbol_rho(double px, double py, double xi_angle,
                  const MediumSpec& medium, const CutoffSpec& cutoff);

// Tabulates the symbol at every node strictly inside the disk (0 outside)
// for n_xi covector angles. The march uses one-cell steps; the pointwise
// symbol_rho is the finer reference. Threshold defaults to 1e-6 of the
// full-data vacuum level 4 pi.
VisibilityMap visibility_map(const GridSpec& grid, const MediumSpec& medium,
                             const CutoffSpec& cutoff, int n_xi,
                             double threshold = 4.0 * kPi * 1e-6);

}  // namespace rte
