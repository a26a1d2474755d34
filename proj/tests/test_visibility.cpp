#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "rte/grid.hpp"
#include "rte/scene.hpp"
#include "rte/transport.hpp"
#include "rte/visibility.hpp"

using namespace rte;

namespace {

int nearest_node(const GridSpec& g, double c) {
  int best = 0;
  for (int i = 1; i < g.n_x; ++i)
    if (std::abs(g.x(i) - c) < std::abs(g.x(best) - c)) best = i;
  return best;
}

int visible_count(const VisibilityMap& m, int iy, int ix) {
  int count = 0;
  for (int k = 0; k < m.n_xi; ++k)
    if (m.visible(k, iy, ix)) ++count;
  return count;
}

}  // namespace

TEST_CASE("vacuum full data sits at the constant symbol level") {
  GridSpec g = make_grid(64, 8);
  MediumSpec m = constant_medium(g, 0.0);
  CutoffSpec cut = full_data_cutoff();

  CHECK(symbol_rho(0.3, -0.2, 1.234, m, cut) == 4.0 * kPi);
  CHECK(symbol_rho(0.0, 0.0, 0.0, m, cut) == 4.0 * kPi);

  VisibilityMap map = visibility_map(g, m, cut, 4);
  for (int iy = 0; iy < g.n_x; ++iy)
    for (int ix = 0; ix < g.n_x; ++ix) {
      double x = g.x(ix), y = g.x(iy);
      for (int k = 0; k < 4; ++k) {
        if (x * x + y * y < 1.0) {
          CHECK(map.value(k, iy, ix) == 4.0 * kPi);
          CHECK(map.visible(k, iy, ix));
        } else {
          CHECK(map.value(k, iy, ix) == 0.0);
          CHECK(!map.visible(k, iy, ix));
        }
      }
    }
}

TEST_CASE("constant absorption damps the symbol by the attenuation square") {
  GridSpec g = make_grid(128, 8);
  MediumSpec m = constant_medium(g, 0.8);
  double rho = symbol_rho(0.0, 0.0, 0.3, m, full_data_cutoff());
  double expect = 4.0 * kPi * std::exp(-1.6);
  CHECK(rho == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("empty cutoff blanks the map") {
  GridSpec g = make_grid(32, 8);
  VisibilityMap map = visibility_map(g, constant_medium(g, 0.2), empty_cutoff(), 6);
  for (double v : map.values) CHECK(v == 0.0);
  for (auto b : map.mask) CHECK(b == 0);
}

TEST_CASE("points whose perpendicular rays exit outside the arc are dark") {
  GridSpec g = make_grid(64, 8);
  MediumSpec m = constant_medium(g, 0.0);
  CutoffSpec cut = make_cutoff(0.0, kPi / 3.0);
  CHECK(symbol_rho(-0.9, 0.0, 0.0, m, cut) == 0.0);
}

TEST_CASE("antipodal covectors are identified") {
  GridSpec g = make_grid(64, 8);
  MediumSpec m = constant_medium(g, 0.4);
  CutoffSpec cut = make_cutoff(0.2, 1.8);
  for (double xi : {-0.7, -2.0, -0.05}) {
    double a = symbol_rho(0.25, -0.3, xi, m, cut);
    double b = symbol_rho(0.25, -0.3, xi + kPi, m, cut);
    CHECK(a == b);
  }
}

TEST_CASE("a nearby arc sees more covectors than the far side") {
  GridSpec g = make_grid(64, 16);
  MediumSpec m = example_medium(g);
  CutoffSpec cut = make_cutoff(0.0, kPi / 3.0);
  VisibilityMap map = visibility_map(g, m, cut, 32);

  int near = visible_count(map, nearest_node(g, 0.2), nearest_node(g, 0.9));
  int far = visible_count(map, nearest_node(g, -0.2), nearest_node(g, -0.9));
  CAPTURE(near);
  CAPTURE(far);
  CHECK(near > far);
  CHECK(near > 0);
}

TEST_CASE("growing the arc never darkens the symbol") {
  GridSpec g = make_grid(32, 8);
  MediumSpec m = constant_medium(g, 0.3);

  CutoffSpec small;
  small.arc_start = 0.2;
  small.arc_end = 1.0;
  small.taper_pos = 0.05;
  small.taper_dir = 0.1;

  CutoffSpec big = small;
  big.arc_start = -0.2;
  big.arc_end = 2.2;

  VisibilityMap ms = visibility_map(g, m, small, 8);
  VisibilityMap mb = visibility_map(g, m, big, 8);
  for (std::size_t i = 0; i < ms.values.size(); ++i)
    CHECK(ms.values[i] <= mb.values[i] + 1e-12);
}

TEST_CASE("map entries agree with the pointwise symbol in vacuum") {
  GridSpec g = make_grid(32, 8);
  MediumSpec m = constant_medium(g, 0.0);
  CutoffSpec cut = make_cutoff(0.5, 2.5);
  VisibilityMap map = visibility_map(g, m, cut, 5);
  for (int k = 0; k < 5; ++k)
    for (int iy = 4; iy < g.n_x; iy += 9)
      for (int ix = 2; ix < g.n_x; ix += 7) {
        double x = g.x(ix), y = g.x(iy);
        if (x * x + y * y >= 1.0) continue;
        CHECK(map.value(k, iy, ix) == symbol_rho(x, y, map.xi(k), m, cut));
      }
}

TEST_CASE("visibility rejects out-of-domain requests") {
  GridSpec g = make_grid(32, 8);
  MediumSpec m = constant_medium(g, 0.1);
  CHECK_THROWS_AS(symbol_rho(1.0, 0.0, 0.0, m, full_data_cutoff()),
                  std::domain_error);
  CHECK_THROWS_AS(symbol_rho(0.9, 0.9, 0.0, m, full_data_cutoff()),
                  std::domain_error);
  CHECK_THROWS_AS(visibility_map(g, m, full_data_cutoff(), 0),
                  std::invalid_argument);
}
