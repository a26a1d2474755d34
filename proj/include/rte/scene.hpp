#pragma once

#include <cstdint>
#include <vector>

#include "rte/grid.hpp"
#include "rte/transport.hpp"

namespace rte {

// One bump of a source phantom. disk uses r only; rect is the axis-aligned
// box [x0 - r, x0 + r] x [y0 - r0, y0 + r0]; spiral is the elliptic cap
// A * sqrt(max(0, 1 - dx^2/r^2 - dy^2/r0^2)).
struct PhantomElement {
  double amplitude = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double r = 0.1;
  double r0 = 0.1;
};

struct PhantomSpec {
  enum class Kind { disk_bumps, rect_bumps, spiral_bumps };
  Kind kind = Kind::disk_bumps;
  std::vector<PhantomElement> elements;
};

// Sum of the elements sampled at the grid nodes. Bumps are hard indicators
// for disk_bumps and rect_bumps and smooth caps for spiral_bumps. Every
// element must fit inside the unit disk; one that pokes out raises
// std::invalid_argument.
ScalarField make_phantom(const PhantomSpec& spec, const GridSpec& grid);

// Presets. The disk and rect layouts are hand-placed arrangements of a few
// well-separated bumps; the spiral preset carries the six heights
// {0.5, 1, 0.3, 0.3, 0.4, 0.3} and radii {0.2, 0.15, 0.1, 0.1, 0.07, 0.03}
// (r0 = r) on an Archimedean arc rho_k = 0.25 + 0.09 k, phi_k = k pi / 3.
PhantomSpec disk_phantom();
PhantomSpec rect_phantom();
PhantomSpec spiral_phantom();

// (1/2pi) (1 - g^2) / (1 + g^2 - 2 g cos(phi)), the standard 2D
// Henyey-Greenstein phase function. Requires |g| < 1.
double henyey_greenstein(double cos_phi, double g);

// The anisotropic reference medium used by the larger experiments:
//   sigma(x, y, eta) = 0.5 * chi_disk * (0.05 + cos^2(xy)) * sin^2(eta)
//   k(x, y, theta, theta') = chi_disk * (0.05 + sin^2(xy)) * HG(theta.theta', 0.85)
// Max sigma is 0.525, so the sweep stability bound holds for any n_x >= 8.
MediumSpec example_medium(const GridSpec& grid);

// sigma identically c on the disk (all directions), no scattering.
MediumSpec constant_medium(const GridSpec& grid, double c);

// Additive noise at a fixed fraction of each direction row's l2 norm.
struct NoiseSpec {
  double mu = 0.0;
  std::uint64_t seed = 0;
};

// Per direction row i: draw an n_x-vector w of standard normals and return
// row_i + mu * |row_i|_2 * w / |w|_2. Rows with zero norm pass through
// unchanged (their draw still happens, so each row consumes a fixed stretch
// of the stream). The generator is a single std::mt19937_64(seed) walked in
// row order; normals come from Box-Muller on u = (next() >> 11) * 2^-53:
// z0 = sqrt(-2 ln(1 - u1)) cos(2 pi u2), z1 = the sin twin. This pins the
// byte-exact output for a given (data, mu, seed) triple.
BoundaryData add_noise(const BoundaryData& b, const NoiseSpec& spec);

}  // namespace rte
