#include "rte/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "rte/parallel.hpp"
#include "rte/spectral.hpp"

namespace rte {

namespace {

std::mutex g_tables_mutex;
std::mutex g_cutoff_mutex;
std::mutex g_attenuation_mutex;

void check_same_grid(const GridSpec& a, const GridSpec& b, const char* op) {
  if (!(a == b)) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

// One row of the forward march; g and out may not alias.
void sweep_row_forward(const double* g, const double* sig, double* out, int n, double sx) {
  out[0] = 0.0;
  for (int j = 1; j < n; ++j)
    out[j] = out[j - 1] + sx * (g[j - 1] - sig[j - 1] * out[j - 1]);
}

void sweep_row_backward(const double* v, const double* sig, double* out, int n, double sx) {
  out[n - 1] = 0.0;
  for (int j = n - 2; j >= 0; --j)
    out[j] = out[j + 1] + sx * (v[j + 1] - sig[j + 1] * out[j + 1]);
}

void check_stability(const double* sig, std::size_t count, double sx, const char* op) {
  double mx = 0.0;
  for (std::size_t i = 0; i < count; ++i) mx = std::max(mx, sig[i]);
  if (sx * mx >= 1.0)
    throw std::invalid_argument(std::string(op) + ": s_x * max(sigma) = " +
                                std::to_string(sx * mx) + " breaks the Euler stability bound");
}

// Shared core of apply_K / apply_K_adjoint for dense kernels; transpose
// swaps the roles of the two angular indices.
AngularField apply_dense(const AngularField& u, const KernelSpec& k, bool transpose) {
  const GridSpec& g = u.grid;
  const std::size_t npix = std::size_t(g.n_x) * g.n_x;
  const double delta = g.delta();
  AngularField out(g);
  parallel_for(g.n_d, [&](std::int64_t i) {
    double* dst = out.slice(static_cast<int>(i));
    for (int j = 0; j < g.n_d; ++j) {
      const std::size_t io = transpose ? std::size_t(j) : std::size_t(i);
      const std::size_t ji = transpose ? std::size_t(i) : std::size_t(j);
      const double* tab = k.dense.data() + (io * g.n_d + ji) * npix;
      const double* src = u.slice(j);
      for (std::size_t p = 0; p < npix; ++p) dst[p] += tab[p] * src[p];
    }
    for (std::size_t p = 0; p < npix; ++p) dst[p] *= delta;
  });
  return out;
}

AngularField apply_factored(const AngularField& u, const KernelSpec& k) {
  const GridSpec& g = u.grid;
  const std::size_t npix = std::size_t(g.n_x) * g.n_x;
  const double delta = g.delta();
  AngularField out(g);
  parallel_for(g.n_d, [&](std::int64_t i) {
    double* dst = out.slice(static_cast<int>(i));
    for (int j = 0; j < g.n_d; ++j) {
      const double c = k.phase_circ[std::size_t((int(i) - j + g.n_d) % g.n_d)];
      if (c == 0.0) continue;
      const double* src = u.slice(j);
      for (std::size_t p = 0; p < npix; ++p) dst[p] += c * src[p];
    }
    const double* kap = k.spatial.v.data();
    for (std::size_t p = 0; p < npix; ++p) dst[p] *= delta * kap[p];
  });
  return out;
}

ScalarField slice_as_field(const AngularField& a, int id) {
  ScalarField f(a.grid);
  std::memcpy(f.v.data(), a.slice(id), f.v.size() * sizeof(double));
  return f;
}

}  // namespace

KernelSpec zero_kernel() { return KernelSpec{}; }

KernelSpec factored_kernel(ScalarField spatial,
                           const std::function<double(double)>& phase_of_cos) {
  KernelSpec k;
  k.kind = KernelSpec::Kind::factored;
  k.grid = spatial.grid;
  k.phase_circ.resize(std::size_t(k.grid.n_d));
  const double delta = k.grid.delta();
  for (int d = 0; d < k.grid.n_d; ++d) {
    // reduce the index gap to [0, n_d/2] before taking the cosine so that
    // circ[d] == circ[n_d - d] holds exactly, not just up to rounding
    const int gap = std::min(d, k.grid.n_d - d);
    k.phase_circ[std::size_t(d)] = phase_of_cos(std::cos(gap * delta));
  }
  k.spatial = std::move(spatial);
  return k;
}

KernelSpec dense_kernel(
    const GridSpec& grid,
    const std::function<double(double, double, double, double)>& k_eval) {
  KernelSpec k;
  k.kind = KernelSpec::Kind::dense;
  k.grid = grid;
  const std::size_t npix = std::size_t(grid.n_x) * grid.n_x;
  k.dense.assign(std::size_t(grid.n_d) * grid.n_d * npix, 0.0);
  for (int io = 0; io < grid.n_d; ++io)
    for (int ji = 0; ji < grid.n_d; ++ji) {
      double* tab = k.dense.data() + (std::size_t(io) * grid.n_d + ji) * npix;
      for (int iy = 0; iy < grid.n_x; ++iy)
        for (int ix = 0; ix < grid.n_x; ++ix)
          tab[std::size_t(iy) * grid.n_x + ix] =
              k_eval(grid.x(ix), grid.x(iy), grid.eta(io), grid.eta(ji));
    }
  return k;
}

const TransportTables& transport_tables(const MediumSpec& medium) {
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  if (medium.tables) return *medium.tables;

  const GridSpec& g = medium.sigma.grid;
  auto t = std::make_shared<TransportTables>();
  t->grid = g;
  t->zero_slice.assign(std::size_t(g.n_x) * g.n_x, 0.0);
  t->vacuum = std::all_of(medium.sigma.v.begin(), medium.sigma.v.end(),
                          [](double s) { return s == 0.0; });
  if (!t->vacuum) {
    t->sigma_rot.resize(std::size_t(g.n_d));
    for (int id = 0; id < g.n_d; ++id) {
      ScalarField rot = rotate(slice_as_field(medium.sigma, id), g.eta(id));
      for (double s : rot.v) t->max_sigma_rot = std::max(t->max_sigma_rot, s);
      t->sigma_rot[std::size_t(id)] = std::move(rot.v);
    }
    if (g.sx() * t->max_sigma_rot >= 1.0)
      throw std::invalid_argument(
          "transport_tables: s_x * max(sigma) = " +
          std::to_string(g.sx() * t->max_sigma_rot) + " breaks the Euler stability bound");
  }
  medium.tables = t;
  return *medium.tables;
}

CutoffSpec make_cutoff(double arc_start, double arc_end) {
  if (arc_end < arc_start)
    throw std::invalid_argument("make_cutoff: arc_end must be >= arc_start");
  CutoffSpec c;
  c.arc_start = arc_start;
  c.arc_end = arc_end;
  c.taper_pos = 0.05 * (arc_end - arc_start);
  c.taper_dir = 0.1;
  return c;
}

CutoffSpec full_data_cutoff() {
  CutoffSpec c = make_cutoff(0.0, kTwoPi);
  // at the default width the direction taper would bite into near-tangent
  // rays that still carry data; shrink it below any grid value of nu . theta
  c.taper_dir = 1e-9;
  return c;
}

CutoffSpec empty_cutoff() {
  CutoffSpec c;
  c.taper_pos = 1e-3;
  c.taper_dir = 0.1;
  return c;
}

ScalarField sweep_forward(const ScalarField& g_rot, const ScalarField& sigma_rot) {
  check_same_grid(g_rot.grid, sigma_rot.grid, "sweep_forward");
  const int n = g_rot.grid.n_x;
  const double sx = g_rot.grid.sx();
  check_stability(sigma_rot.v.data(), sigma_rot.v.size(), sx, "sweep_forward");
  ScalarField u(g_rot.grid);
  parallel_for(n, [&](std::int64_t iy) {
    const std::size_t off = std::size_t(iy) * n;
    sweep_row_forward(g_rot.v.data() + off, sigma_rot.v.data() + off, u.v.data() + off, n, sx);
  });
  return u;
}

ScalarField sweep_backward(const ScalarField& v_rot, const ScalarField& sigma_rot) {
  check_same_grid(v_rot.grid, sigma_rot.grid, "sweep_backward");
  const int n = v_rot.grid.n_x;
  const double sx = v_rot.grid.sx();
  check_stability(sigma_rot.v.data(), sigma_rot.v.size(), sx, "sweep_backward");
  ScalarField w(v_rot.grid);
  parallel_for(n, [&](std::int64_t iy) {
    const std::size_t off = std::size_t(iy) * n;
    sweep_row_backward(v_rot.v.data() + off, sigma_rot.v.data() + off, w.v.data() + off, n, sx);
  });
  return w;
}

AngularField apply_T1_inv(const AngularField& g, const MediumSpec& medium,
                          BoundaryData* accumulate_outflow) {
  check_same_grid(g.grid, medium.sigma.grid, "apply_T1_inv");
  if (accumulate_outflow)
    check_same_grid(g.grid, accumulate_outflow->grid, "apply_T1_inv");
  const TransportTables& tab = transport_tables(medium);
  const GridSpec& gr = g.grid;
  const int n = gr.n_x;
  const double sx = gr.sx();
  AngularField out(gr);
  for (int id = 0; id < gr.n_d; ++id) {
    ScalarField g_rot = rotate(slice_as_field(g, id), gr.eta(id));
    ScalarField u_rot(gr);
    const double* sig = tab.sigma_rot_ptr(id);
    parallel_for(n, [&](std::int64_t iy) {
      const std::size_t off = std::size_t(iy) * n;
      sweep_row_forward(g_rot.v.data() + off, sig + off, u_rot.v.data() + off, n, sx);
    });
    if (accumulate_outflow)
      for (int j = 0; j < n; ++j)
        accumulate_outflow->at(id, j) += u_rot.at(j, n - 1);
    ScalarField u = rotate(u_rot, -gr.eta(id));
    std::memcpy(out.slice(id), u.v.data(), u.v.size() * sizeof(double));
  }
  return out;
}

AngularField apply_T1_inv_adjoint(const AngularField& v, const MediumSpec& medium) {
  check_same_grid(v.grid, medium.sigma.grid, "apply_T1_inv_adjoint");
  const TransportTables& tab = transport_tables(medium);
  const GridSpec& gr = v.grid;
  const int n = gr.n_x;
  const double sx = gr.sx();
  AngularField out(gr);
  for (int id = 0; id < gr.n_d; ++id) {
    ScalarField v_rot = rotate(slice_as_field(v, id), gr.eta(id));
    ScalarField w_rot(gr);
    const double* sig = tab.sigma_rot_ptr(id);
    parallel_for(n, [&](std::int64_t iy) {
      const std::size_t off = std::size_t(iy) * n;
      sweep_row_backward(v_rot.v.data() + off, sig + off, w_rot.v.data() + off, n, sx);
    });
    ScalarField w = rotate(w_rot, -gr.eta(id));
    std::memcpy(out.slice(id), w.v.data(), w.v.size() * sizeof(double));
  }
  return out;
}

AngularField apply_K(const AngularField& u, const MediumSpec& medium) {
  const KernelSpec& k = medium.kernel;
  switch (k.kind) {
    case KernelSpec::Kind::zero:
      return AngularField(u.grid);
    case KernelSpec::Kind::factored:
      check_same_grid(u.grid, k.grid, "apply_K");
      return apply_factored(u, k);
    case KernelSpec::Kind::dense:
      check_same_grid(u.grid, k.grid, "apply_K");
      return apply_dense(u, k, false);
  }
  throw std::logic_error("apply_K: unknown kernel kind");
}

AngularField apply_K_adjoint(const AngularField& v, const MediumSpec& medium) {
  const KernelSpec& k = medium.kernel;
  switch (k.kind) {
    case KernelSpec::Kind::zero:
      return AngularField(v.grid);
    case KernelSpec::Kind::factored:
      // the circulant is symmetric by construction, so the adjoint is the
      // same operator, bit for bit
      check_same_grid(v.grid, k.grid, "apply_K_adjoint");
      return apply_factored(v, k);
    case KernelSpec::Kind::dense:
      check_same_grid(v.grid, k.grid, "apply_K_adjoint");
      return apply_dense(v, k, true);
  }
  throw std::logic_error("apply_K_adjoint: unknown kernel kind");
}

AngularField extend_J(const ScalarField& f) {
  AngularField out(f.grid);
  const std::size_t npix = f.v.size();
  for (int id = 0; id < f.grid.n_d; ++id)
    std::memcpy(out.slice(id), f.v.data(), npix * sizeof(double));
  return out;
}

ScalarField collapse_J_adjoint(const AngularField& g) {
  const GridSpec& gr = g.grid;
  const std::size_t npix = std::size_t(gr.n_x) * gr.n_x;
  const int nd = gr.n_d;
  const double delta = gr.delta();
  ScalarField out(gr);
  constexpr std::size_t kBlock = 256;
  const std::int64_t nblocks = std::int64_t((npix + kBlock - 1) / kBlock);
  parallel_for(nblocks, [&](std::int64_t blk) {
    thread_local std::vector<double> tmp;
    tmp.resize(std::size_t(nd) * kBlock);
    const std::size_t p0 = std::size_t(blk) * kBlock;
    const std::size_t bn = std::min(kBlock, npix - p0);
    for (int id = 0; id < nd; ++id) {
      const double* src = g.slice(id) + p0;
      double* dst = tmp.data() + std::size_t(id) * kBlock;
      for (std::size_t b = 0; b < bn; ++b) dst[b] = src[b];
    }
    // pairwise tree over the direction index: summing n_d equal values then
    // costs no rounding at all, which is what makes collapse(extend(f))
    // land exactly on 2*pi*f
    for (int m = nd; m > 1; m >>= 1)
      for (int id = 0; id < m / 2; ++id) {
        double* a = tmp.data() + std::size_t(2 * id) * kBlock;
        const double* b = tmp.data() + std::size_t(2 * id + 1) * kBlock;
        double* dst = tmp.data() + std::size_t(id) * kBlock;
        for (std::size_t p = 0; p < bn; ++p) dst[p] = a[p] + b[p];
      }
    for (std::size_t b = 0; b < bn; ++b) out.v[p0 + b] = delta * tmp[b];
  });
  return out;
}

double tau_plus(double px, double py, double tx, double ty) {
  const double r2 = px * px + py * py;
  if (r2 > 1.0) throw std::domain_error("tau_plus: point outside the unit disk");
  const double dot = px * tx + py * ty;
  return -dot + std::sqrt(dot * dot + 1.0 - r2);
}

AngularField attenuation_E(const MediumSpec& medium) {
  const TransportTables& tab = transport_tables(medium);
  {
    std::lock_guard<std::mutex> lock(g_attenuation_mutex);
    if (tab.attenuation) return *tab.attenuation;
  }
  const GridSpec& gr = tab.grid;
  const int n = gr.n_x;
  const double sx = gr.sx();
  auto e = std::make_shared<AngularField>(gr);
  if (tab.vacuum) {
    std::fill(e->v.begin(), e->v.end(), 1.0);
  } else {
    for (int id = 0; id < gr.n_d; ++id) {
      const double* sig = tab.sigma_rot[std::size_t(id)].data();
      ScalarField e_rot(gr);
      parallel_for(n, [&](std::int64_t iy) {
        const std::size_t off = std::size_t(iy) * n;
        double acc = 0.0;
        for (int j = n - 1; j >= 0; --j) {
          acc += sx * sig[off + j];
          e_rot.v[off + j] = std::exp(-acc);
        }
      });
      ScalarField e_slice = rotate(e_rot, -gr.eta(id));
      std::memcpy(e->slice(id), e_slice.v.data(), e_slice.v.size() * sizeof(double));
    }
  }
  std::lock_guard<std::mutex> lock(g_attenuation_mutex);
  if (!tab.attenuation) tab.attenuation = e;
  return *tab.attenuation;
}

double cutoff_chi(const CutoffSpec& spec, double boundary_pos_angle, double eta) {
  const double arc = spec.arc_end - spec.arc_start;
  if (arc <= 0.0) return 0.0;

  double pos = 1.0;
  if (arc < kTwoPi) {
    double t = std::fmod(boundary_pos_angle - spec.arc_start, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= arc) return 0.0;
    const double w = spec.taper_pos;
    if (w > 0.0) {
      if (t < w) {
        const double s = std::sin(kPi * t / (2.0 * w));
        pos *= s * s;
      }
      if (arc - t < w) {
        const double s = std::sin(kPi * (arc - t) / (2.0 * w));
        pos *= s * s;
      }
    }
  }

  double dir = 1.0;
  if (spec.outward_only) {
    const double d = std::cos(eta - boundary_pos_angle);
    if (d <= 0.0) return 0.0;
    if (spec.taper_dir > 0.0 && d < spec.taper_dir) {
      const double s = std::sin(kPi * d / (2.0 * spec.taper_dir));
      dir = s * s;
    }
  }
  return pos * dir;
}

const AngularField& cutoff_chi_sharp(const CutoffSpec& spec, const GridSpec& grid) {
  std::lock_guard<std::mutex> lock(g_cutoff_mutex);
  if (spec.tables && spec.tables->grid == grid) return spec.tables->chi_sharp;

  auto t = std::make_shared<CutoffTables>();
  t->grid = grid;
  t->chi_sharp = AngularField(grid);
  const int n = grid.n_x;
  parallel_for(grid.n_d, [&](std::int64_t id) {
    const double eta = grid.eta(static_cast<int>(id));
    const double c = std::cos(eta), s = std::sin(eta);
    double* dst = t->chi_sharp.slice(static_cast<int>(id));
    for (int iy = 0; iy < n; ++iy) {
      const double py = grid.x(iy);
      for (int ix = 0; ix < n; ++ix) {
        const double px = grid.x(ix);
        const double dot = px * c + py * s;
        const double rad = dot * dot + 1.0 - (px * px + py * py);
        if (rad <= 0.0) continue;  // line misses the disk
        const double tau = -dot + std::sqrt(rad);
        const double phi = std::atan2(py + tau * s, px + tau * c);
        dst[std::size_t(iy) * n + ix] = cutoff_chi(spec, phi, eta);
      }
    }
  });
  spec.tables = t;
  return spec.tables->chi_sharp;
}

AngularField extend_boundary(const BoundaryData& b) {
  const GridSpec& gr = b.grid;
  const int n = gr.n_x;
  AngularField out(gr);
  for (int id = 0; id < gr.n_d; ++id) {
    ScalarField frame(gr);
    for (int iy = 0; iy < n; ++iy)
      std::fill_n(frame.v.data() + std::size_t(iy) * n, n, b.at(id, iy));
    ScalarField slice = rotate(frame, -gr.eta(id));
    std::memcpy(out.slice(id), slice.v.data(), slice.v.size() * sizeof(double));
  }
  return out;
}

BoundaryData restrict_boundary(const AngularField& u) {
  const GridSpec& gr = u.grid;
  const int n = gr.n_x;
  BoundaryData b(gr);
  const double tangent = 1.0 - 0.5 * gr.sx();
  const double sx = gr.sx();
  for (int id = 0; id < gr.n_d; ++id) {
    ScalarField frame = rotate(slice_as_field(u, id), gr.eta(id));
    for (int j = 0; j < n; ++j) {
      const double y = gr.x(j);
      if (std::abs(y) >= tangent) continue;
      // read a few cells inside the disk exit rather than at the square
      // edge: the value is the same for ray-constant fields, but the sample
      // stays clear of the corner regions that the lab-frame representation
      // truncates, and of the ringing their cut edge radiates
      const double x_exit = std::sqrt(1.0 - y * y);
      const int jx = std::min(n - 1, int(std::floor((x_exit + 1.0) / sx - 0.5)) - 3);
      b.at(id, j) = frame.at(j, std::max(0, jx));
    }
  }
  return b;
}

}  // namespace rte
