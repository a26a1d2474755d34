#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "rte/grid.hpp"

namespace rte {

// Scattering kernel k(x, theta, theta') in one of three shapes: identically
// zero, a separable product kappa(x) * p(theta . theta'), or a dense table
// over direction pairs. The dense shape stores n_d^2 spatial fields and is
// meant for small test grids only.
struct KernelSpec {
  enum class Kind { zero, factored, dense };
  Kind kind = Kind::zero;
  GridSpec grid{};
  ScalarField spatial;             // factored: kappa(x)
  std::vector<double> phase_circ;  // factored: p at cos(gap * delta), length n_d
  std::vector<double> dense;       // dense: [i_out][j_in][iy][ix]
};

KernelSpec zero_kernel();

// phase_of_cos is evaluated at the cosine of the angular distance between
// grid directions, reduced to [0, pi] so the circulant comes out symmetric
// bit for bit; a factored kernel is therefore its own adjoint.
KernelSpec factored_kernel(ScalarField spatial,
                           const std::function<double(double)>& phase_of_cos);

// k_eval(x, y, eta_out, eta_in) samples k(x, theta(eta_out), theta(eta_in)).
KernelSpec dense_kernel(
    const GridSpec& grid,
    const std::function<double(double, double, double, double)>& k_eval);

// Per-medium cache: every absorption slice rotated into its own transport
// frame, the stability bound over those frames, and the lazily built
// attenuation field. Built once on first use and shared afterwards.
struct TransportTables {
  GridSpec grid{};
  bool vacuum = false;
  double max_sigma_rot = 0.0;
  std::vector<std::vector<double>> sigma_rot;  // empty when vacuum
  std::vector<double> zero_slice;
  mutable std::shared_ptr<const AngularField> attenuation;

  const double* sigma_rot_ptr(int id) const {
    return vacuum ? zero_slice.data() : sigma_rot[id].data();
  }
};

// Absorption and scattering on the unit-disk scale. sigma may depend on
// direction. The explicit Euler sweeps require s_x * max sigma < 1; the
// table build enforces it.
struct MediumSpec {
  AngularField sigma;
  KernelSpec kernel;
  mutable std::shared_ptr<const TransportTables> tables;
};

// Builds (or returns) the cached tables. Thread safe.
const TransportTables& transport_tables(const MediumSpec& medium);

struct CutoffTables {
  GridSpec grid{};
  AngularField chi_sharp;
};

// Smooth data cutoff chi_V on the outflow boundary: a cosine-squared taper
// over the boundary-position arc [arc_start, arc_end] times a cosine-squared
// taper in d = nu . theta that vanishes for non-outward directions. Values
// lie in [0, 1]; the plateau value is exactly 1.
struct CutoffSpec {
  double arc_start = 0.0;
  double arc_end = 0.0;
  double taper_pos = 0.0;  // radians of arc eaten by each position taper
  double taper_dir = 0.0;  // width of the taper in nu . theta
  bool outward_only = true;
  mutable std::shared_ptr<const CutoffTables> tables;
};

// Arc cutoff with default taper widths: 5% of the arc length in position,
// 0.1 in nu . theta. Requires arc_end >= arc_start.
CutoffSpec make_cutoff(double arc_start, double arc_end);

// Whole outflow boundary, direction taper narrowed so far that every grid
// ray with any outward component sits on the plateau.
CutoffSpec full_data_cutoff();

// Identically zero cutoff (empty arc).
CutoffSpec empty_cutoff();

// Explicit Euler march of d/dx u + sigma u = g along +x with zero inflow at
// the left edge, one independent recursion per row:
//   u[0] = 0,  u[j] = u[j-1] + s_x * (g[j-1] - sigma[j-1] * u[j-1]).
// Throws if s_x * max sigma >= 1.
ScalarField sweep_forward(const ScalarField& g_rot, const ScalarField& sigma_rot);

// Exact matrix transpose of sweep_forward, marching right to left:
//   w[n-1] = 0,  w[j] = w[j+1] + s_x * (v[j+1] - sigma[j+1] * w[j+1]).
ScalarField sweep_backward(const ScalarField& v_rot, const ScalarField& sigma_rot);

// Left inverse of the advection operator theta . grad + sigma with zero
// inflow: per direction, rotate source and absorption into the frame where
// the ray direction is +x, sweep, rotate back. When accumulate_outflow is
// given, the last in-frame column (the outflow edge seen before rotating
// back) is added onto it row by row.
AngularField apply_T1_inv(const AngularField& g, const MediumSpec& medium,
                          BoundaryData* accumulate_outflow = nullptr);

// Adjoint solve: same frame dance with the backward sweep. Adjoint to
// apply_T1_inv up to the rotation error budget.
AngularField apply_T1_inv_adjoint(const AngularField& v, const MediumSpec& medium);

// Discrete scattering: out(x, eta_i) = delta * sum_j k(x, eta_i, eta_j) *
// u(x, eta_j), first angular slot of k being the outgoing direction.
AngularField apply_K(const AngularField& u, const MediumSpec& medium);

// Transpose of apply_K in the angular index. Identical to apply_K for
// factored kernels (symmetric circulant).
AngularField apply_K_adjoint(const AngularField& v, const MediumSpec& medium);

// Replicates f across all directions.
AngularField extend_J(const ScalarField& f);

// delta * sum over directions, summed pairwise so that
// collapse_J_adjoint(extend_J(f)) returns 2*pi*f without rounding drift.
ScalarField collapse_J_adjoint(const AngularField& g);

// Distance from x = (px, py) along the unit direction (tx, ty) to the exit
// of the unit disk. Requires |x| <= 1.
double tau_plus(double px, double py, double tx, double ty);

// E(x, theta) = exp(-integral of sigma over the forward ray), computed per
// direction in the rotated frame by a suffix left-Riemann sum and rotated
// back. Cached on the medium tables.
AngularField attenuation_E(const MediumSpec& medium);

// chi_V evaluated at a boundary position angle and a ray direction eta.
double cutoff_chi(const CutoffSpec& spec, double boundary_pos_angle, double eta);

// chi_V^# as a field: chi_V carried inward along rays, i.e. evaluated at the
// exit point x + tau_plus(x, theta) theta of the line through x. Points whose
// line misses the disk get 0. Cached on the spec; the reference stays valid
// while the spec (and its table cache) lives.
const AngularField& cutoff_chi_sharp(const CutoffSpec& spec, const GridSpec& grid);

// Broadcasts each boundary row down the rotated-frame columns (constant
// along rays) and rotates back.
AngularField extend_boundary(const BoundaryData& b);

// Per direction, the outflow value of each chord, read in the rotated frame
// at the disk-exit column (equal to the square-edge value for ray-constant
// fields, but clear of the corner regions the square representation cuts
// off). Tangent rows |y_j| >= 1 - s_x/2 are zeroed.
BoundaryData restrict_boundary(const AngularField& u);

}  // namespace rte
