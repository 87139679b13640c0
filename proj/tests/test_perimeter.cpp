#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symmcal/generators.hpp"
#include "symmcal/perimeter.hpp"
#include "symmcal/rearrange.hpp"

using namespace symmcal;
constexpr double kPi = std::numbers::pi;

TEST_CASE("method names round-trip") {
  for (auto m : {PerimeterMethod::FaceCount, PerimeterMethod::SmoothedGradient, PerimeterMethod::Minkowski,
                 PerimeterMethod::Convolution})
    CHECK(parse_perimeter_method(to_string(m)) == m);
  CHECK_THROWS(parse_perimeter_method("hausdorff"));
}

TEST_CASE("face count on an axis-aligned square is exact") {
  const Grid g = Grid::cube(2, 32, 32.0);
  const RegionMask sq = rectangle_mask(g, 0.0, 0.0, 10.0, 10.0);
  REQUIRE(sq.count() == 100);
  CHECK(perimeter_face_count(sq).value == doctest::Approx(40.0));
}

TEST_CASE("face count in 1-D counts transitions") {
  const Grid g = Grid::cube(1, 10, 10.0);
  RegionMask m(g, {0, 1, 1, 0, 0, 1, 0, 1, 1, 0});
  CHECK(perimeter_face_count(m).value == 6.0);
}

TEST_CASE("estimators on a disk") {
  const Grid g = Grid::cube(2, 256, 2.4);
  const double h = g.spacing()[0];
  const RegionMask disk = disk_mask(g, 0.0, 0.0, 0.8);
  const double p = 2.0 * kPi * 0.8;
  CHECK(perimeter_minkowski(disk, 4.0 * h).value == doctest::Approx(p).epsilon(0.03));
  CHECK(perimeter_convolution(disk, 6.0 * h).value == doctest::Approx(p).epsilon(0.05));
  CHECK(perimeter_smoothed_gradient(disk, 3.0 * h).value == doctest::Approx(p).epsilon(0.05));
  const double fc = perimeter_face_count(disk).value / p;
  CHECK(fc > 1.2);
  CHECK(fc < 1.35);
}

TEST_CASE("estimator guards") {
  const Grid g = Grid::cube(2, 32, 2.0);
  const double h = g.spacing()[0];
  const RegionMask disk = disk_mask(g, 0.0, 0.0, 0.5);
  CHECK_THROWS_AS(perimeter_minkowski(disk, 1.5 * h), UnderResolved);
  const RegionMask wide = disk_mask(g, 0.0, 0.0, 0.9);
  CHECK_THROWS_AS(perimeter_minkowski(wide, 4.0 * h), MarginOverflow);
  CHECK(perimeter_minkowski(RegionMask(g), 4.0 * h).value == 0.0);
}

TEST_CASE("Minkowski sum of boxes") {
  const Grid g = Grid::cube(2, 41, 41.0);
  const RegionMask a = rectangle_mask(g, 0.0, 0.0, 5.0, 3.0);
  const RegionMask b = rectangle_mask(g, 0.0, 0.0, 3.0, 7.0);
  const RegionMask s = minkowski_sum(a, b);
  // 5x3 plus 3x7 (centred odd boxes) is 7x9
  CHECK(s.count() == 63);
  CHECK(check_brunn_minkowski(a, b).pass);
}

TEST_CASE("isoperimetric checks on convex masks") {
  const Grid g = Grid::cube(2, 128, 2.2);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Rng rng(s);
    const RegionMask a = rasterize(g, random_convex_polygon(rng, 0.1, -0.1, 0.25, 0.6));
    CHECK(check_sharp_isoperimetric(a).pass);
    CHECK(check_isoperimetric_mask(a).pass);
  }
}

TEST_CASE("co-area on a radial Gaussian") {
  const Grid g = Grid::cube(2, 128, 7.0);
  ScalarField f(g);
  const auto c = cell_centers(g);
  for (std::size_t i = 0; i < c.size(); ++i) f.values[i] = std::exp(-(c[i][0] * c[i][0] + c[i][1] * c[i][1]));
  const CheckResult r = coarea_check(f, 100);
  // integral of |grad f| is pi^{3/2}
  CHECK(r.lhs == doctest::Approx(std::pow(kPi, 1.5)).epsilon(0.01));
  CHECK(coarea_gap(r) < 0.03);
  CHECK_THROWS(coarea_check(f, std::vector<double>{0.5, 0.2}));
  // level-set perimeter of exp(-r^2) at t is 2 pi sqrt(-ln t)
  const double t = 0.4;
  CHECK(coarea_density(f, t, 0.02) == doctest::Approx(2.0 * kPi * std::sqrt(-std::log(t))).epsilon(0.05));
}

TEST_CASE("Polya-Szego on a random field") {
  const Grid g = Grid::cube(2, 96, 2.0);
  const ScalarField f = random_smooth_field(g, 17, 3);
  CHECK(check_polya_szego(f, 1.0).pass);
  CHECK(check_polya_szego(f, 2.0).pass);
}

TEST_CASE("polygons") {
  const Polygon sq{{{0, 0}, {2, 0}, {2, 1}, {0, 1}}};
  CHECK(polygon_signed_area(sq) == 2.0);
  CHECK(polygon_length(sq) == 6.0);
  CHECK(polygon_is_simple(sq));
  const Polygon cw{{{0, 0}, {0, 1}, {2, 1}, {2, 0}}};
  CHECK(polygon_signed_area(cw) == -2.0);
  const CheckResult c = check_planar_polygon(cw);
  CHECK(c.pass);
  CHECK(c.lhs == doctest::Approx(8.0 * kPi));
  CHECK(c.rhs == 36.0);
  const Polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_FALSE(polygon_is_simple(bowtie));
  CHECK_THROWS(check_planar_polygon(bowtie));
  const Polygon reg = regular_polygon(256, 1.0);
  const double l = polygon_length(reg);
  const double ratio = l * l / (4.0 * kPi * polygon_signed_area(reg));
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 1.001);
}

TEST_CASE("random star polygons are simple and satisfy the planar inequality") {
  for (std::uint64_t s = 1; s <= 50; ++s) {
    Rng rng(s);
    const Polygon p = random_star_polygon(rng);
    if (!polygon_is_simple(p)) continue;
    const double l = polygon_length(p);
    CHECK(l * l - 4.0 * kPi * std::abs(polygon_signed_area(p)) >= 0.0);
  }
}
