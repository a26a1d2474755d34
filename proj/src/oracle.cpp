#include "rte/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rte {

namespace {

double bilinear(const ScalarField& f, double x, double y) {
  const GridSpec& g = f.grid;
  const double u = (x + 1.0) / g.sx() - 0.5;
  const double v = (y + 1.0) / g.sx() - 0.5;
  const int i0 = int(std::floor(u)), j0 = int(std::floor(v));
  const double fu = u - i0, fv = v - j0;
  double acc = 0.0;
  for (int dj = 0; dj < 2; ++dj)
    for (int di = 0; di < 2; ++di) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || i >= g.n_x || j < 0 || j >= g.n_x) continue;
      const double w = (di ? fu : 1.0 - fu) * (dj ? fv : 1.0 - fv);
      acc += w * f.at(j, i);
    }
  return acc;
}

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
      const double w = (di ? fu : 1.0 - fu) * (dj ? fv : 1.0 - fv);
      acc += w * a.at(id, j, i);
    }
  return acc;
}

// integral of v over [0, n*h] nodes v_0..v_n under the requested rule
double segment_integral(const std::vector<double>& v, double h,
                        RayMarchSpec::Quadrature q) {
  const std::size_t n = v.size() - 1;
  double s = 0.0;
  if (q == RayMarchSpec::Quadrature::left_riemann) {
    for (std::size_t i = 0; i < n; ++i) s += v[i];
  } else {
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    s += 0.5 * (v[0] + v[n]);
  }
  return h * s;
}

}  // namespace

double oracle_xray(const ScalarField& f, const AngularField& sigma, double px,
                   double py, double theta, const RayMarchSpec& march) {
  const GridSpec& g = f.grid;
  if (px * px + py * py > 1.0 + 1e-12)
    throw std::domain_error("oracle_xray: point outside the unit disk");
  double step = march.step == 0.0 ? 0.25 * g.sx() : march.step;
  if (!(step > 0.0) || step > g.sx())
    throw std::invalid_argument("oracle_xray: step must lie in (0, s_x]");

  const double tx = std::cos(theta), ty = std::sin(theta);
  const double dot = px * tx + py * ty;
  const double rad = dot * dot + 1.0 - (px * px + py * py);
  if (rad <= 0.0) return 0.0;
  const double tminus = -dot - std::sqrt(rad);
  const double tplus = -dot + std::sqrt(rad);
  if (tminus >= 0.0) return 0.0;

  const int id =
      int((std::llround(theta / g.delta() - 0.5) % g.n_d + g.n_d) % g.n_d);

  // suffix attenuation: S(t) = integral of sigma over [t, 0] plus the fixed
  // tail over [0, tau_plus]
  const int np = std::max(1, int(std::ceil(std::max(tplus, 0.0) / step)));
  const double hp = std::max(tplus, 0.0) / np;
  std::vector<double> sig_plus(np + 1);
  for (int j = 0; j <= np; ++j)
    sig_plus[j] = bilinear_slice(sigma, id, px + j * hp * tx, py + j * hp * ty);
  const double tail = segment_integral(sig_plus, hp, march.quadrature);

  const int nm = std::max(1, int(std::ceil(-tminus / step)));
  const double hm = -tminus / nm;
  std::vector<double> sig_minus(nm + 1), suffix(nm + 1), integrand(nm + 1);
  for (int i = 0; i <= nm; ++i) {
    const double t = tminus + i * hm;
    sig_minus[i] = bilinear_slice(sigma, id, px + t * tx, py + t * ty);
  }
  suffix[nm] = 0.0;
  for (int i = nm - 1; i >= 0; --i)
    suffix[i] = suffix[i + 1] +
                (march.quadrature == RayMarchSpec::Quadrature::left_riemann
                     ? hm * sig_minus[i]
                     : 0.5 * hm * (sig_minus[i] + sig_minus[i + 1]));
  for (int i = 0; i <= nm; ++i) {
    const double t = tminus + i * hm;
    integrand[i] =
        std::exp(-(suffix[i] + tail)) * bilinear(f, px + t * tx, py + t * ty);
  }
  return segment_integral(integrand, hm, march.quadrature);
}

double oracle_normal_point(const ScalarField& f, const MediumSpec& medium,
                           const CutoffSpec& cutoff, double px, double py) {
  for (double s : medium.sigma.v)
    if (s != 0.0)
      throw std::invalid_argument(
          "oracle_normal_point: unsupported configuration (sigma != 0)");
  if (medium.kernel.kind != KernelSpec::Kind::zero)
    throw std::invalid_argument(
        "oracle_normal_point: unsupported configuration (scattering kernel)");
  if (cutoff.arc_end - cutoff.arc_start < kTwoPi)
    throw std::invalid_argument(
        "oracle_normal_point: unsupported configuration (partial cutoff)");

  const GridSpec& g = f.grid;
  const double sx = g.sx();
  const double half = 0.5 * sx;
  auto corner = [](double u, double v) {
    if (u == 0.0 || v == 0.0) return 0.0;
    return u * std::asinh(v / std::abs(u)) + v * std::asinh(u / std::abs(v));
  };

  double acc = 0.0;
  for (int iy = 0; iy < g.n_x; ++iy) {
    const double dy = g.x(iy) - py;
    for (int ix = 0; ix < g.n_x; ++ix) {
      const double dx = g.x(ix) - px;
      if (std::abs(dx) <= 1.5 * sx && std::abs(dy) <= 1.5 * sx) {
        // the cell holding x and its neighbors carry the whole midpoint
        // error of the 1/|y - x| kernel; integrate them in closed form
        // (the corner antiderivative is exact across the singularity)
        const double a1 = dx - half, a2 = dx + half;
        const double b1 = dy - half, b2 = dy + half;
        const double cell =
            corner(a2, b2) - corner(a1, b2) - corner(a2, b1) + corner(a1, b1);
        acc += 2.0 * f.at(iy, ix) * cell;
      } else {
        acc += 2.0 * f.at(iy, ix) * sx * sx / std::sqrt(dx * dx + dy * dy);
      }
    }
  }
  return acc;
}

ScalarField oracle_rotate_bilinear(const ScalarField& f, double eta) {
  const GridSpec& g = f.grid;
  const double c = std::cos(eta), s = std::sin(eta);
  ScalarField out(g);
  for (int iy = 0; iy < g.n_x; ++iy) {
    const double y = g.x(iy);
    for (int ix = 0; ix < g.n_x; ++ix) {
      const double x = g.x(ix);
      out.at(iy, ix) = bilinear(f, c * x - s * y, s * x + c * y);
    }
  }
  return out;
}

}  // namespace rte
