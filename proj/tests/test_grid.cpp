#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symmcal/grid.hpp"

using namespace symmcal;

TEST_CASE("cube grid geometry") {
  const Grid g = Grid::cube(2, 4, 2.0);
  CHECK(g.dim() == 2);
  CHECK(g.size() == 16);
  CHECK(g.spacing()[0] == 0.5);
  CHECK(g.cell_volume() == 0.25);
  CHECK(g.isotropic());
  const auto c = cell_centers(g);
  // centres at -0.75, -0.25, 0.25, 0.75; last axis fastest
  CHECK(c[0][0] == -0.75);
  CHECK(c[0][1] == -0.75);
  CHECK(c[1][1] == -0.25);
  CHECK(c[4][0] == -0.25);
}

TEST_CASE("grid validation") {
  CHECK_THROWS(Grid({}, {}));
  CHECK_THROWS(Grid({4, 4, 4, 4}, {1, 1, 1, 1}));
  CHECK_THROWS(Grid({4, 4}, {1.0, 0.0}));
  CHECK_THROWS(Grid({4, 0}, {1.0, 1.0}));
  CHECK_THROWS(Grid({4, 4}, {1.0}));
}

TEST_CASE("volume and unit ball") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  const Grid g = Grid::cube(3, 8, 4.0);
  RegionMask m(g);
  for (int i = 0; i < 10; ++i) m.members[static_cast<std::size_t>(i * 7)] = 1;
  CHECK(volume(m) == doctest::Approx(10.0 * g.cell_volume()));
}

TEST_CASE("gradient of a linear field is exact") {
  const Grid g({16, 16}, {0.1, 0.2});
  ScalarField f(g);
  const auto c = cell_centers(g);
  for (std::size_t i = 0; i < c.size(); ++i) f.values[i] = 3.0 * c[i][0] - 4.0 * c[i][1];
  const ScalarField gm = gradient_magnitude(f);
  for (double v : gm.values) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("degenerate axis contributes no derivative") {
  const Grid g({1, 8}, {1.0, 0.5});
  ScalarField f(g);
  for (std::size_t i = 0; i < 8; ++i) f.values[i] = 2.0 * static_cast<double>(i) * 0.5;
  for (double v : gradient_magnitude(f).values) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("convolution with a delta is the identity and shifts with the kernel") {
  const Grid g = Grid::cube(2, 9, 9.0);
  ScalarField f = random_smooth_field(g, 4, 2);
  ScalarField delta(g);
  delta.values[4 * 9 + 4] = 1.0 / g.cell_volume();
  const ScalarField same = convolve(f, delta);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(same.values[i] == doctest::Approx(f.values[i]));

  ScalarField point(g), k(g);
  point.values[3 * 9 + 5] = 1.0;
  k.values[4 * 9 + 5] = 1.0;  // offset +1 along the last axis
  const ScalarField moved = convolve(point, k);
  CHECK(moved.values[3 * 9 + 6] == doctest::Approx(g.cell_volume()));
  CHECK(integral(moved) == doctest::Approx(g.cell_volume() * g.cell_volume()));
}

TEST_CASE("gaussian blur preserves mass away from the boundary") {
  const Grid g = Grid::cube(2, 65, 4.0);
  ScalarField f(g);
  f.values[32 * 65 + 32] = 1.0;
  const ScalarField b = gaussian_blur(f, 0.2);
  CHECK(integral(b) == doctest::Approx(integral(f)).epsilon(1e-12));
  CHECK(b.values[32 * 65 + 32] < f.values[32 * 65 + 32]);
}

TEST_CASE("level sets and norms") {
  const Grid g = Grid::cube(1, 4, 4.0);
  ScalarField f(g, {0.0, 2.0, 1.0, 3.0});
  CHECK(super_level_set(f, 1.0).count() == 2);  // strict
  CHECK(sub_level_set(f, 1.0).count() == 2);
  CHECK(lp_norm(f, 1.0) == doctest::Approx(6.0));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(14.0)));
  CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 3.0);
  CHECK_THROWS(lp_norm(f, 0.5));
  ScalarField other(Grid::cube(1, 4, 2.0), {0, 0, 0, 0});
  CHECK_THROWS_AS(inner_product(f, other), GridMismatch);
}

TEST_CASE("random smooth fields are seeded, non-negative and vanish on the boundary") {
  const Grid g = Grid::cube(2, 32, 2.0);
  const ScalarField a = random_smooth_field(g, 99, 3);
  const ScalarField b = random_smooth_field(g, 99, 3);
  const ScalarField c = random_smooth_field(g, 100, 3);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.min() >= 0.0);
  CHECK(a.boundary_is_zero());
}
