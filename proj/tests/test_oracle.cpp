#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rte/grid.hpp"
#include "rte/oracle.hpp"
#include "rte/pipeline.hpp"
#include "rte/scene.hpp"
#include "rte/spectral.hpp"
#include "rte/transport.hpp"

using namespace rte;

namespace {

ScalarField disk_indicator(const GridSpec& g, double radius) {
  ScalarField f(g);
  for (int iy = 0; iy < g.n_x; ++iy)
    for (int ix = 0; ix < g.n_x; ++ix) {
      double x = g.x(ix), y = g.x(iy);
      if (x * x + y * y < radius * radius) f.at(iy, ix) = 1.0;
    }
  f.disk_supported = true;
  return f;
}

ScalarField gaussian(const GridSpec& g, double cx, double cy, double w) {
  ScalarField f(g);
  for (int iy = 0; iy < g.n_x; ++iy)
    for (int ix = 0; ix < g.n_x; ++ix) {
      double dx = g.x(ix) - cx, dy = g.x(iy) - cy;
      f.at(iy, ix) = std::exp(-(dx * dx + dy * dy) / (w * w));
    }
  return f;
}

AngularField gaussian_sigma(const GridSpec& g, double amp) {
  AngularField s(g);
  for (int id = 0; id < g.n_d; ++id)
    for (int iy = 0; iy < g.n_x; ++iy)
      for (int ix = 0; ix < g.n_x; ++ix) {
        double x = g.x(ix), y = g.x(iy);
        s.at(id, iy, ix) = amp * std::exp(-(x * x + y * y) / 0.16);
      }
  return s;
}

}  // namespace

TEST_CASE("oracle_xray recovers chord lengths in vacuum") {
  GridSpec g = make_grid(128, 8);
  ScalarField f = disk_indicator(g, 0.4);
  AngularField sigma(g);

  RayMarchSpec coarse{g.sx(), RayMarchSpec::Quadrature::trapezoid};
  double through_center = oracle_xray(f, sigma, 1.0, 0.0, 0.0, coarse);
  CHECK(std::abs(through_center - 0.8) <= g.sx());

  double fine = oracle_xray(f, sigma, 1.0, 0.0, 0.0);
  CHECK(std::abs(fine - 0.8) <= g.sx());

  double diagonal = oracle_xray(f, sigma, std::sqrt(0.5), std::sqrt(0.5),
                                kPi / 4.0, coarse);
  CHECK(std::abs(diagonal - 0.8) <= g.sx());

  ScalarField zero(g);
  CHECK(oracle_xray(zero, sigma, 1.0, 0.0, 0.0) == 0.0);

  double tangent = oracle_xray(f, sigma, 0.0, 1.0, 0.0, coarse);
  CHECK(std::abs(tangent) < 1e-12);
}

TEST_CASE("oracle_xray validates its inputs") {
  GridSpec g = make_grid(32, 8);
  ScalarField f = disk_indicator(g, 0.4);
  AngularField sigma(g);
  CHECK_THROWS_AS(oracle_xray(f, sigma, 1.2, 0.0, 0.0), std::domain_error);
  RayMarchSpec too_coarse{2.0 * g.sx(), RayMarchSpec::Quadrature::trapezoid};
  CHECK_THROWS_AS(oracle_xray(f, sigma, 1.0, 0.0, 0.0, too_coarse),
                  std::invalid_argument);
}

TEST_CASE("oracle_xray converges at the order of its quadrature") {
  GridSpec g = make_grid(128, 8);
  ScalarField f = gaussian(g, 0.15, -0.1, 0.3);
  AngularField sigma = gaussian_sigma(g, 0.8);

  auto run = [&](double h, RayMarchSpec::Quadrature q) {
    return oracle_xray(f, sigma, 0.6, 0.3, 0.9, RayMarchSpec{h, q});
  };

  double h = g.sx();
  double l0 = run(h, RayMarchSpec::Quadrature::left_riemann);
  double l1 = run(h / 2, RayMarchSpec::Quadrature::left_riemann);
  double l2 = run(h / 4, RayMarchSpec::Quadrature::left_riemann);
  double ratio = std::abs(l1 - l2) / std::abs(l0 - l1);
  CAPTURE(ratio);
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);

  double t0 = run(h, RayMarchSpec::Quadrature::trapezoid);
  double t1 = run(h / 2, RayMarchSpec::Quadrature::trapezoid);
  double t2 = run(h / 4, RayMarchSpec::Quadrature::trapezoid);
  double tratio = std::abs(t1 - t2) / std::abs(t0 - t1);
  CAPTURE(tratio);
  CHECK(tratio < 0.35);
}

TEST_CASE("oracle_xray reproduces the forward data of an absorbing medium") {
  GridSpec g = make_grid(128, 8);
  ScalarField f = disk_indicator(g, 0.5);
  MediumSpec m = constant_medium(g, 0.5);
  ForwardResult fw = forward_XV(f, m, full_data_cutoff(), 0);

  const double tangent = 1.0 - 0.5 * g.sx();
  double num = 0.0, den = 0.0;
  for (int id = 0; id < g.n_d; ++id) {
    double eta = g.eta(id);
    for (int j = 0; j < g.n_x; ++j) {
      double y = g.x(j);
      if (std::abs(y) >= tangent) continue;
      double phi = eta + std::asin(y);
      double ref = oracle_xray(f, m.sigma, std::cos(phi), std::sin(phi), eta);
      double d = fw.data.at(id, j) - ref;
      num += d * d;
      den += ref * ref;
    }
  }
  double rel = std::sqrt(num / den);
  CAPTURE(rel);
  CHECK(rel < 0.03);
}

TEST_CASE("oracle_normal_point evaluates the classical kernel") {
  GridSpec g = make_grid(256, 8);
  MediumSpec m = constant_medium(g, 0.0);
  CutoffSpec cut = full_data_cutoff();

  ScalarField f = disk_indicator(g, 0.5);
  double at_center = oracle_normal_point(f, m, cut, 0.0, 0.0);
  CHECK(at_center == doctest::Approx(kTwoPi).epsilon(0.02));

  ScalarField zero(g);
  CHECK(oracle_normal_point(zero, m, cut, 0.0, 0.0) == 0.0);

  ScalarField centered = gaussian(g, 0.0, 0.0, 0.25);
  ScalarField shifted = gaussian(g, 0.2, 0.14, 0.25);
  double v0 = oracle_normal_point(centered, m, cut, 0.0, 0.0);
  double v1 = oracle_normal_point(shifted, m, cut, 0.2, 0.14);
  CHECK(std::abs(v1 - v0) <= 1e-3 * std::abs(v0));
}

TEST_CASE("oracle_normal_point rejects configurations its kernel cannot cover") {
  GridSpec g = make_grid(64, 8);
  ScalarField f = disk_indicator(g, 0.4);
  CHECK_THROWS_AS(
      oracle_normal_point(f, constant_medium(g, 0.3), full_data_cutoff(), 0, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      oracle_normal_point(f, example_medium(g), full_data_cutoff(), 0, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      oracle_normal_point(f, constant_medium(g, 0.0), make_cutoff(0.0, kPi / 3.0), 0, 0),
      std::invalid_argument);
}

TEST_CASE("oracle_rotate_bilinear matches the spectral rotation on smooth fields") {
  GridSpec g = make_grid(64, 8);
  ScalarField f = gaussian(g, 0.2, -0.1, 0.3);

  ScalarField same = oracle_rotate_bilinear(f, 0.0);
  for (std::size_t i = 0; i < f.v.size(); ++i)
    CHECK(same.v[i] == doctest::Approx(f.v[i]).epsilon(1e-13));

  ScalarField ref = oracle_rotate_bilinear(f, 0.35);
  ScalarField fast = rotate(f, 0.35);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.v.size(); ++i) {
    num += (fast.v[i] - ref.v[i]) * (fast.v[i] - ref.v[i]);
    den += ref.v[i] * ref.v[i];
  }
  CHECK(std::sqrt(num / den) < 1e-2);
}
