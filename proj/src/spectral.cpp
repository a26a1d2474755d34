#include "rte/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "rte/parallel.hpp"

namespace rte {

namespace {

using cplx = std::complex<double>;

// One cached in-place plan per (size, sign). Planning is serialized; execution
// through the new-array interface is thread-safe. FFTW_ESTIMATE keeps plan
// selection independent of runtime measurements, so results are reproducible
// run to run; FFTW_UNALIGNED lets plans run on any std::vector storage.
fftw_plan plan_for(int n, int sign) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::scoped_lock lock(mu);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(n, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!p) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, p);
  return p;
}

void fft_inplace(int n, cplx* buf, int sign) {
  fftw_plan p = plan_for(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf), reinterpret_cast<fftw_complex*>(buf));
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

double dirichlet_kernel(int m, double y) {
  if (m <= 0 || m % 2 != 0)
    throw std::invalid_argument("dirichlet_kernel: m must be a positive even integer");
  // reduce to one period [-m, m)
  double r = std::fmod(y, 2.0 * m);
  if (r >= m) r -= 2.0 * m;
  if (r < -m) r += 2.0 * m;
  double den = std::sin(kPi * r / m);
  if (den == 0.0) return std::abs(r) < m / 2.0 ? 1.0 : -1.0;  // r = 0 or r = -m
  return std::sin(kPi * r) / (m * den);
}

std::vector<double> spectral_shift(const std::vector<double>& x, double s) {
  if (x.empty() || x.size() % 2 != 0)
    throw std::invalid_argument("spectral_shift: input length must be even and nonzero");
  if (s == 0.0) return x;
  const int m = static_cast<int>(x.size());
  const double mm = m;

  double sumsq = 0.0;
  for (double v : x) sumsq += v * v;
  if (sumsq == 0.0) return x;

  // boundary phase making the effective interpolation kernel D_m
  std::vector<cplx> w(m);
  for (int j = 0; j < m; ++j) w[j] = x[j] * std::polar(1.0, kPi * (mm - 1.0) * j / mm);
  fft_inplace(m, w.data(), FFTW_FORWARD);

  // linear phase realizing the shift, plus its boundary correction
  const double step = -kTwoPi * s / mm;
  const cplx fix = std::polar(1.0, kPi * (mm - 1.0) * s / mm);
  const cplx rot = std::polar(1.0, step);
  cplx cur(1.0, 0.0);
  for (int k = 0; k < m; ++k) {
    if ((k & 31) == 0) cur = std::polar(1.0, step * k);
    w[k] *= cur * fix;
    cur *= rot;
  }
  fft_inplace(m, w.data(), FFTW_BACKWARD);

  const double inv = 1.0 / mm;
  std::vector<double> out(x.size());
  double max_imag = 0.0;
  for (int l = 0; l < m; ++l) {
    cplx z = w[l] * std::polar(1.0, -kPi * (mm - 1.0) * l / mm);
    out[l] = z.real() * inv;
    max_imag = std::max(max_imag, std::abs(z.imag()) * inv);
  }
  if (max_imag > 1e-8 * std::sqrt(sumsq))
    throw std::runtime_error("spectral_shift: imaginary residue above 1e-8 of input norm");
  return out;
}

namespace detail {

// Precomputed tables for resampling a length m_in vector at positions
// h*l + s, l = 0..n_out-1, shared by every column of a shear/dilate pass.
// Only the shift s varies per column.
struct ResamplePass {
  int m_in = 0;
  int n_out = 0;
  int conv_n = 0;
  double h = 0.0;
  double alpha = 0.0;              // chirp spacing of the evaluation transform
  std::vector<cplx> pre;           // e^{+i pi (M-1) j / M}
  std::vector<cplx> spin;          // e^{-i pi alpha k^2}
  std::vector<cplx> mix;           // e^{-i pi alpha l^2 - i pi (M-1) h l / M}
  std::vector<cplx> bhat;          // FFT of the circular chirp e^{+i pi alpha j^2}
};

ResamplePass make_pass(int m_in, int n_out, double h) {
  ResamplePass p;
  p.m_in = m_in;
  p.n_out = n_out;
  p.h = h;
  p.alpha = -h / m_in;
  p.conv_n = next_pow2(m_in + n_out - 1);

  const double mm = m_in;
  p.pre.resize(m_in);
  p.spin.resize(m_in);
  p.mix.resize(n_out);
  for (int j = 0; j < m_in; ++j) p.pre[j] = std::polar(1.0, kPi * (mm - 1.0) * j / mm);
  for (int k = 0; k < m_in; ++k)
    p.spin[k] = std::polar(1.0, -kPi * p.alpha * double(k) * double(k));
  for (int l = 0; l < n_out; ++l)
    p.mix[l] = std::polar(1.0, -kPi * p.alpha * double(l) * double(l) - kPi * (mm - 1.0) * h * l / mm);

  std::vector<cplx> b(p.conv_n, cplx(0.0, 0.0));
  for (int j = -(m_in - 1); j <= n_out - 1; ++j) {
    int idx = ((j % p.conv_n) + p.conv_n) % p.conv_n;
    b[idx] = std::polar(1.0, kPi * p.alpha * double(j) * double(j));
  }
  fft_inplace(p.conv_n, b.data(), FFTW_FORWARD);
  p.bhat = std::move(b);
  return p;
}

void resample(const ResamplePass& p, const double* x, double s, double* out) {
  double sumsq = 0.0;
  for (int j = 0; j < p.m_in; ++j) sumsq += x[j] * x[j];
  if (sumsq == 0.0) {
    std::fill(out, out + p.n_out, 0.0);
    return;
  }

  thread_local std::vector<cplx> w, a;
  w.resize(p.m_in);
  a.assign(p.conv_n, cplx(0.0, 0.0));

  for (int j = 0; j < p.m_in; ++j) w[j] = x[j] * p.pre[j];
  fft_inplace(p.m_in, w.data(), FFTW_FORWARD);

  // shift phase (the one per-column quantity) fused with the chirp prephase
  const double step = kTwoPi * s / p.m_in;
  const cplx rot = std::polar(1.0, step);
  cplx cur(1.0, 0.0);
  for (int k = 0; k < p.m_in; ++k) {
    if ((k & 31) == 0) cur = std::polar(1.0, step * k);
    a[k] = w[k] * cur * p.spin[k];
    cur *= rot;
  }

  fft_inplace(p.conv_n, a.data(), FFTW_FORWARD);
  for (int q = 0; q < p.conv_n; ++q) a[q] *= p.bhat[q];
  fft_inplace(p.conv_n, a.data(), FFTW_BACKWARD);

  const double scale = 1.0 / (double(p.conv_n) * double(p.m_in));
  const cplx cshift = std::polar(1.0, -kPi * (p.m_in - 1.0) * s / p.m_in);
  double max_imag = 0.0;
  for (int l = 0; l < p.n_out; ++l) {
    cplx z = a[l] * p.mix[l] * cshift;
    out[l] = z.real() * scale;
    max_imag = std::max(max_imag, std::abs(z.imag()) * scale);
  }
  if (max_imag > 1e-8 * std::sqrt(sumsq))
    throw std::runtime_error("dilate_and_shift: imaginary residue above 1e-8 of input norm");
}

}  // namespace detail

std::vector<std::complex<double>> fractional_dft(const std::vector<std::complex<double>>& x,
                                                 double alpha) {
  if (x.empty()) throw std::invalid_argument("fractional_dft: empty input");
  const int n = static_cast<int>(x.size());
  const int conv_n = next_pow2(2 * n - 1);

  std::vector<cplx> a(conv_n, cplx(0.0, 0.0)), b(conv_n, cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k)
    a[k] = x[k] * std::polar(1.0, -kPi * alpha * double(k) * double(k));
  for (int j = -(n - 1); j <= n - 1; ++j) {
    int idx = ((j % conv_n) + conv_n) % conv_n;
    b[idx] = std::polar(1.0, kPi * alpha * double(j) * double(j));
  }
  fft_inplace(conv_n, a.data(), FFTW_FORWARD);
  fft_inplace(conv_n, b.data(), FFTW_FORWARD);
  for (int q = 0; q < conv_n; ++q) a[q] *= b[q];
  fft_inplace(conv_n, a.data(), FFTW_BACKWARD);

  const double inv = 1.0 / conv_n;
  std::vector<cplx> out(x.size());
  for (int l = 0; l < n; ++l)
    out[l] = a[l] * inv * std::polar(1.0, -kPi * alpha * double(l) * double(l));
  return out;
}

std::vector<double> dilate_and_shift(const std::vector<double>& x, double s, double h) {
  if (x.empty() || x.size() % 2 != 0)
    throw std::invalid_argument("dilate_and_shift: input length must be even and nonzero");
  const int m_in = static_cast<int>(x.size());
  detail::ResamplePass pass = detail::make_pass(m_in, m_in / 2, h);
  std::vector<double> out(static_cast<std::size_t>(m_in / 2));
  detail::resample(pass, x.data(), s, out.data());
  return out;
}

PaddedImage pad_rows(const ScalarField& f) {
  PaddedImage p(f.grid);
  const int n = f.grid.n_x;
  std::copy(f.v.begin(), f.v.end(), p.v.begin() + static_cast<std::size_t>(n / 2) * n);
  return p;
}

ScalarField unpad_rows(const PaddedImage& p) {
  ScalarField f(p.grid);
  const int n = p.grid.n_x;
  auto first = p.v.begin() + static_cast<std::size_t>(n / 2) * n;
  std::copy(first, first + static_cast<std::size_t>(n) * n, f.v.begin());
  return f;
}

PaddedImage shear_y(const PaddedImage& img, double alpha) {
  const int n = img.grid.n_x;
  const int rows = 2 * n;
  if (img.v.size() != static_cast<std::size_t>(rows) * n)
    throw std::invalid_argument("shear_y: image is not row-padded to 2 n_x by n_x");
  if (alpha == 0.0) return img;

  PaddedImage out(img.grid);
  const double sx = img.grid.sx();
  parallel_for(n, [&](std::int64_t c) {
    std::vector<double> col(rows);
    for (int r = 0; r < rows; ++r) col[r] = img.at(r, static_cast<int>(c));
    const double s = -alpha * img.grid.x(static_cast<int>(c)) / sx;
    std::vector<double> shifted = spectral_shift(col, s);
    for (int r = 0; r < rows; ++r) out.at(r, static_cast<int>(c)) = shifted[r];
  });
  return out;
}

RotationPlan RotationPlan::make(double eta) {
  RotationPlan p;
  p.angle = eta;
  double m = std::fmod(eta, kTwoPi);
  double q = std::round(m / (kPi / 2.0));
  double residual = m - q * (kPi / 2.0);
  // snap so that exact multiples of pi/2 take the pure permutation path
  if (std::abs(residual) < 1e-13) residual = 0.0;
  long qi = std::lround(q);
  p.quarter_turns = static_cast<int>(((qi % 4) + 4) % 4);
  p.residual = residual;
  p.shear_y_coeff = std::tan(residual);
  p.dilate_y_coeff = std::cos(residual);
  p.shear_x_coeff = -std::sin(residual);
  p.dilate_x_coeff = 1.0 / std::cos(residual);
  return p;
}

namespace {

void transpose_square(const double* in, double* out, int n) {
  constexpr int kBlock = 32;
  for (int by = 0; by < n; by += kBlock)
    for (int bx = 0; bx < n; bx += kBlock) {
      int ey = std::min(by + kBlock, n);
      int ex = std::min(bx + kBlock, n);
      for (int iy = by; iy < ey; ++iy)
        for (int ix = bx; ix < ex; ++ix)
          out[static_cast<std::size_t>(ix) * n + iy] = in[static_cast<std::size_t>(iy) * n + ix];
    }
}

void quarter_turn(const double* in, double* out, int n, int qt) {
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double v;
      switch (qt) {
        case 1: v = in[static_cast<std::size_t>(ix) * n + (n - 1 - iy)]; break;
        case 2: v = in[static_cast<std::size_t>(n - 1 - iy) * n + (n - 1 - ix)]; break;
        case 3: v = in[static_cast<std::size_t>(n - 1 - ix) * n + iy]; break;
        default: v = in[static_cast<std::size_t>(iy) * n + ix]; break;
      }
      out[static_cast<std::size_t>(iy) * n + ix] = v;
    }
}

// Residual-angle rotation: two fused shear+dilate passes. Pass 1 resamples
// each column (shear tan(r), dilation 1/cos(r)), pass 2 each row (shear
// -sin(r), dilation cos(r)). Each pass zero-pads its 1-D sections to length
// 2 n_x, so disk-supported content never wraps.
void rotate_residual(const GridSpec& g, std::vector<double>& img, const RotationPlan& plan) {
  const int n = g.n_x;
  const int m = 2 * n;
  const double sx = g.sx();
  const double r = plan.residual;

  const double h1 = 1.0 / std::cos(r);
  const double h2 = std::cos(r);
  const double spos1 = n - 0.5 - h1 * (n - 1) / 2.0;
  const double spos2 = n - 0.5 - h2 * (n - 1) / 2.0;
  const detail::ResamplePass pass1 = detail::make_pass(m, n, h1);
  const detail::ResamplePass pass2 = detail::make_pass(m, n, h2);

  std::vector<double> a(img.size()), b(img.size());
  transpose_square(img.data(), a.data(), n);
  parallel_for(n, [&](std::int64_t c) {
    thread_local std::vector<double> padded;
    padded.assign(m, 0.0);
    std::copy(&a[c * n], &a[c * n] + n, padded.begin() + n / 2);
    const double s = spos1 + plan.shear_y_coeff * g.x(static_cast<int>(c)) / sx;
    detail::resample(pass1, padded.data(), s, &b[c * n]);
  });
  transpose_square(b.data(), a.data(), n);
  parallel_for(n, [&](std::int64_t row) {
    thread_local std::vector<double> padded;
    padded.assign(m, 0.0);
    std::copy(&a[row * n], &a[row * n] + n, padded.begin() + n / 2);
    const double s = spos2 + plan.shear_x_coeff * g.x(static_cast<int>(row)) / sx;
    detail::resample(pass2, padded.data(), s, &img[row * n]);
  });
}

}  // namespace

ScalarField rotate(const ScalarField& f, double eta) {
  const int n = f.grid.n_x;
  if (f.v.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("rotate: field size does not match its grid");

  double total = 0.0, outside = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double y = f.grid.x(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double vv = f.at(iy, ix) * f.at(iy, ix);
      total += vv;
      if (f.grid.x(ix) * f.grid.x(ix) + y * y >= 1.0) outside += vv;
    }
  }

  const RotationPlan plan = RotationPlan::make(eta);
  ScalarField out(f.grid);
  if (plan.quarter_turns == 0)
    out.v = f.v;
  else
    quarter_turn(f.v.data(), out.v.data(), n, plan.quarter_turns);
  if (plan.residual != 0.0) rotate_residual(f.grid, out.v, plan);

  out.disk_supported = false;
  out.support_warning = f.support_warning || (total > 0.0 && outside > 1e-6 * total);
  return out;
}

}  // namespace rte
