#pragma once

#include "rte/grid.hpp"
#include "rte/transport.hpp"

namespace rte {

// Marching control for the brute-force references. step = 0 picks s_x / 4
// of the field being integrated; an explicit step may not exceed s_x.
struct RayMarchSpec {
  enum class Quadrature { left_riemann, trapezoid };
  double step = 0.0;
  Quadrature quadrature = Quadrature::trapezoid;
};

// Attenuated ray integral from the disk entry point up to x, marching the
// chord with bilinear sampling of f and of the nearest direction slice of
// sigma. Deliberately brute force: shares no kernels with the transport
// solver, so the two can audit each other. Requires |x| <= 1.
double oracle_xray(const ScalarField& f, const AngularField& sigma, double px,
                   double py, double theta, const RayMarchSpec& march = {});

// Direct evaluation of the imaging operator at one point via its classical
// kernel: integral of 2 f(y) / |x - y| dy by midpoint sum over cells, with
// the singular cell integrated in closed form. Only meaningful where that
// kernel is exact, so any absorption, scattering, or partial cutoff in the
// arguments raises std::invalid_argument.
double oracle_normal_point(const ScalarField& f, const MediumSpec& medium,
                           const CutoffSpec& cutoff, double px, double py);

// Textbook bilinear image rotation by the same pullback convention as the
// spectral rotate: out(z) = f(R(eta) z), zeros outside the node hull.
ScalarField oracle_rotate_bilinear(const ScalarField& f, double eta);

}  // namespace rte
