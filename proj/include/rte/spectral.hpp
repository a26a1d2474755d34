#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rte/grid.hpp"

namespace rte {

// D_m(y) = sin(pi y) / (m sin(pi y / m)) for even m: the 2m-periodic kernel
// whose integer translates interpolate length-m sample vectors band-limited
// to half-integer frequency indices. Removable singularities are filled in:
// D_m(2km) = 1, D_m((2k+1)m) = -1.
double dirichlet_kernel(int m, double y);

// Samples the band-limited interpolant of x (nodes 0..M-1, M even) at the
// shifted nodes l - s, so content moves by +s index units. FFT, linear phase,
// inverse FFT, with boundary phases that make the effective kernel D_M.
std::vector<double> spectral_shift(const std::vector<double>& x, double s);

// G^{N,alpha}[x](l) = sum_k x[k] exp(-2 pi i alpha k l), k, l = 0..N-1: the
// DFT with frequency spacing alpha in place of 1/N. Always evaluated through
// the chirp-z factorization; alpha = 1/N reproduces the standard DFT.
std::vector<std::complex<double>> fractional_dft(const std::vector<std::complex<double>>& x,
                                                 double alpha);

// Samples the interpolant of x (nodes 0..2m-1) at positions h*l + s for
// l = 0..m-1. One forward FFT, a frequency-domain shift phase, and a chirp-z
// transform evaluate all outputs in O(m log m); this is the single resampling
// kernel behind rotate().
std::vector<double> dilate_and_shift(const std::vector<double>& x, double s, double h);

// Field with its rows zero-padded to twice the grid height: rows
// n_x/2 .. 3n_x/2 - 1 hold the original image, the rest are zero. Working
// shape for the vertical shear, which moves content across row boundaries.
struct PaddedImage {
  GridSpec grid;
  std::vector<double> v;

  PaddedImage() = default;
  explicit PaddedImage(const GridSpec& g)
      : grid(g), v(static_cast<std::size_t>(2 * g.n_x) * g.n_x, 0.0) {}

  int rows() const { return 2 * grid.n_x; }
  int cols() const { return grid.n_x; }
  double& at(int iy, int ix) { return v[static_cast<std::size_t>(iy) * grid.n_x + ix]; }
  double at(int iy, int ix) const { return v[static_cast<std::size_t>(iy) * grid.n_x + ix]; }
};

PaddedImage pad_rows(const ScalarField& f);
ScalarField unpad_rows(const PaddedImage& p);

// Vertical shear: the column at x_c is spectrally shifted by -alpha * x_c in
// the y coordinate (s = -alpha * x_c / s_x index units).
PaddedImage shear_y(const PaddedImage& img, double alpha);

// Rotation angle split into exact quarter turns plus a residual handled
// spectrally. The residual stays in [-pi/4, pi/4], keeping |tan| <= 1 and the
// dilation factors within [cos(pi/4), 1/cos(pi/4)].
struct RotationPlan {
  double angle = 0.0;
  int quarter_turns = 0;  // in {0,1,2,3}, applied as index permutations
  double residual = 0.0;
  double shear_y_coeff = 0.0;   // tan(residual)
  double dilate_y_coeff = 0.0;  // cos(residual)
  double shear_x_coeff = 0.0;   // -sin(residual)
  double dilate_x_coeff = 0.0;  // 1/cos(residual)

  static RotationPlan make(double eta);
};

// Pullback of f by the counterclockwise coordinate rotation of angle eta:
// out(z) = f(R(eta) z), so content moves clockwise for positive eta. Quarter
// turns are exact permutations; the residual runs as two fused shear+dilate
// passes (columns, then rows). Inputs should be supported in the unit disk;
// if more than 1e-6 of the input energy lies outside, the result carries
// support_warning.
ScalarField rotate(const ScalarField& f, double eta);

}  // namespace rte
