#include "rte/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rte {

namespace {

void check_disk_support(const ScalarField& f) {
  const GridSpec& g = f.grid;
  double inside = 0.0, outside = 0.0;
  for (int iy = 0; iy < g.n_x; ++iy) {
    const double y = g.x(iy);
    for (int ix = 0; ix < g.n_x; ++ix) {
      const double x = g.x(ix);
      const double e = f.at(iy, ix) * f.at(iy, ix);
      (x * x + y * y <= 1.0 ? inside : outside) += e;
    }
  }
  if (outside > 1e-6 * (inside + outside))
    throw std::invalid_argument(
        "forward_XV: source leaks more than 1e-6 of its energy outside the unit disk");
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::runtime_error(std::string(what) + ": non-finite values");
}

}  // namespace

ForwardResult forward_XV(const ScalarField& f, const MediumSpec& medium,
                         const CutoffSpec& cutoff, int m1) {
  if (m1 < 0) throw std::invalid_argument("forward_XV: m1 must be >= 0");
  check_disk_support(f);
  const GridSpec& g = f.grid;

  ForwardResult r;
  r.raw_data = BoundaryData(g);
  AngularField term = apply_T1_inv(extend_J(f), medium, &r.raw_data);
  r.u_total = term;
  r.term_norms.push_back(std::sqrt(inner_angular(term, term)));
  r.u_terms.push_back(std::move(term));
  for (int j = 1; j <= m1; ++j) {
    AngularField next =
        apply_T1_inv(apply_K(r.u_terms.back(), medium), medium, &r.raw_data);
    for (std::size_t i = 0; i < next.v.size(); ++i) r.u_total.v[i] += next.v[i];
    r.term_norms.push_back(std::sqrt(inner_angular(next, next)));
    r.u_terms.push_back(std::move(next));
  }

  const double tangent = 1.0 - 0.5 * g.sx();
  r.data = BoundaryData(g);
  for (int id = 0; id < g.n_d; ++id) {
    const double eta = g.eta(id);
    for (int j = 0; j < g.n_x; ++j) {
      const double y = g.x(j);
      if (std::abs(y) >= tangent) {
        r.raw_data.at(id, j) = 0.0;
        continue;
      }
      r.data.at(id, j) =
          cutoff_chi(cutoff, eta + std::asin(y), eta) * r.raw_data.at(id, j);
    }
  }

  check_finite(r.term_norms, "forward_XV");
  check_finite(r.raw_data.v, "forward_XV");
  return r;
}

NormalResult adjoint_XV(const BoundaryData& b, const MediumSpec& medium,
                        const CutoffSpec& cutoff, int m2) {
  if (m2 < 0) throw std::invalid_argument("adjoint_XV: m2 must be >= 0");
  const GridSpec& g = b.grid;
  const AngularField& chis = cutoff_chi_sharp(cutoff, g);
  const AngularField e = attenuation_E(medium);

  NormalResult r;
  AngularField v = extend_boundary(b);
  for (std::size_t i = 0; i < v.v.size(); ++i) v.v[i] *= chis.v[i] * e.v[i];
  AngularField sum = v;
  r.v_terms.push_back(std::move(v));
  for (int j = 1; j <= m2; ++j) {
    AngularField next =
        apply_T1_inv_adjoint(apply_K_adjoint(r.v_terms.back(), medium), medium);
    for (std::size_t i = 0; i < next.v.size(); ++i) sum.v[i] += next.v[i];
    r.v_terms.push_back(std::move(next));
  }
  r.image = collapse_J_adjoint(sum);
  check_finite(r.image.v, "adjoint_XV");
  return r;
}

NormalResult normal_operator(const ScalarField& f, const MediumSpec& medium,
                             const CutoffSpec& cutoff, int m1, int m2) {
  ForwardResult fw = forward_XV(f, medium, cutoff, m1);
  // release the series terms before the adjoint pass; at production scale
  // they dominate the footprint
  std::vector<AngularField>().swap(fw.u_terms);
  fw.u_total = AngularField();
  NormalResult r = adjoint_XV(fw.data, medium, cutoff, m2);
  r.forward_term_norms = std::move(fw.term_norms);
  return r;
}

}  // namespace rte
