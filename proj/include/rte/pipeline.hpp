#pragma once

#include <vector>

#include "rte/grid.hpp"
#include "rte/transport.hpp"

namespace rte {

// Truncated scattering series of a boundary measurement. Term j carries the
// particles scattered exactly j times; u_total is their running sum. raw_data
// is the outflow of u_total with tangent rows zeroed, data is raw_data with
// the visible-set weights applied. term_norms holds the angular norm of each
// term, the convergence diagnostic of the series.
struct ForwardResult {
  std::vector<AngularField> u_terms;
  AngularField u_total;
  BoundaryData raw_data;
  BoundaryData data;
  std::vector<double> term_norms;
};

// Back-projection terms and their collapsed image. forward_term_norms is
// filled only by normal_operator, which keeps the forward diagnostics with
// the image they produced.
struct NormalResult {
  std::vector<AngularField> v_terms;
  ScalarField image;
  std::vector<double> forward_term_norms;
};

// Simulates the measured outflow data of the source f: m1 + 1 series terms
// u_0 = T1^-1 J f, u_j = T1^-1 K u_{j-1}, outflow captured in the sweep
// frame and weighted by the cutoff at each chord's exit point. f must keep
// all but a 1e-6 energy fraction inside the unit disk; non-finite values
// anywhere in the result raise std::runtime_error.
ForwardResult forward_XV(const ScalarField& f, const MediumSpec& medium,
                         const CutoffSpec& cutoff, int m1);

// Adjoint of the forward map: v_0 carries the data back along its chords
// weighted by chi^# and the attenuation, v_j = (T1^-1)* K* v_{j-1}, and the
// image is the direction sum of the v_j.
NormalResult adjoint_XV(const BoundaryData& b, const MediumSpec& medium,
                        const CutoffSpec& cutoff, int m2);

// adjoint_XV(forward_XV(f).data): the imaging operator whose output keeps
// the visible singularities of f. Forward term norms ride along in the
// result.
NormalResult normal_operator(const ScalarField& f, const MediumSpec& medium,
                             const CutoffSpec& cutoff, int m1, int m2);

}  // namespace rte
