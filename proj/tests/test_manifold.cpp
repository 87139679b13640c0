#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symmcal/generators.hpp"
#include "symmcal/manifold.hpp"

using namespace symmcal;
using namespace symmcal::manifold;
constexpr double kPi = std::numbers::pi;

namespace {

std::shared_ptr<const WeightedRadialGrid> polar(std::size_t cells, double r1, std::vector<double> sigma = {}) {
  return std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::from_weight(
      [](double r) { return r; }, WeightedRadialGrid::uniform_edges(0.0, r1, cells), 2.0 * kPi, std::move(sigma)));
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS(WeightedRadialGrid({0.0}, {}, 1.0));
  CHECK_THROWS(WeightedRadialGrid({0.0, 1.0, 0.5}, {1.0, 1.0}, 1.0));
  CHECK_THROWS(WeightedRadialGrid({0.0, 1.0}, {0.0}, 1.0));
  CHECK_THROWS(WeightedRadialGrid({0.0, 1.0}, {1.0}, 1.0, {0.5, 0.6}));
  CHECK_NOTHROW(WeightedRadialGrid({0.0, 1.0}, {1.0}, 1.0, {0.25, 0.75}));
}

TEST_CASE("cumulative volume of polar and spherical weights") {
  const auto g = polar(100, 2.0);
  CHECK(cumulative_volume(*g, 1.3) == doctest::Approx(kPi * 1.69).epsilon(1e-4));
  CHECK(g->total_volume() == doctest::Approx(4.0 * kPi).epsilon(1e-12));  // Simpson is exact for r
  const WeightedRadialGrid s = WeightedRadialGrid::from_weight(
      [](double r) { return r * r; }, WeightedRadialGrid::uniform_edges(0.0, 1.0, 10), 4.0 * kPi);
  CHECK(s.total_volume() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
}

TEST_CASE("r* on the polar grid") {
  const auto g = polar(40000, 2.0);
  for (double v : {0.0, 0.1, 1.0, 5.0, 12.0}) CHECK(std::abs(rearrange_set_M(v, *g) - std::sqrt(v / kPi)) <= 1e-8);
  CHECK_THROWS_AS(rearrange_set_M(4.0 * kPi + 1.0, *g), CapacityExceeded);
  CHECK_THROWS(rearrange_set_M(-1.0, *g));
  // uniqueness: any bracket gives the same root
  CHECK(rearrange_set_M(3.0, *g, 0.5, 1.5) == doctest::Approx(rearrange_set_M(3.0, *g)).epsilon(1e-12));
  CHECK_THROWS(rearrange_set_M(3.0, *g, 1.5, 1.9));
}

TEST_CASE("uniform weights reduce to a sorted permutation") {
  const auto g = std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::uniform_edges(0.0, 1.0, 6),
                                                            std::vector<double>(6, 1.0), 1.0);
  const ManifoldField f(g, {0.2, 0.9, 0.0, 0.5, 0.9, 0.1});
  const ManifoldField s = rearrange_field_M(f);
  CHECK(s.values == std::vector<double>{0.9, 0.9, 0.5, 0.2, 0.1, 0.0});
}

TEST_CASE("properties on random fields") {
  const auto g = polar(48, 2.0, {0.5 * kPi, kPi, 0.5 * kPi});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const ManifoldField f = random_manifold_field(g, rng);
    const ManifoldField h = random_manifold_field(g, rng);
    CHECK(check_lp_M(f, 1.0).pass);
    CHECK(check_lp_M(f, 2.0).pass);
    CHECK(check_hardy_littlewood_M(f, h).pass);
    CHECK(check_lp_contraction_M(f, h, 1.0).pass);
    CHECK(check_level_sets_M(f, 0.3).pass);
    CHECK(coarea_M_check(f).pass);
    // non-increasing along the cell order; radial up to one transitional shell per level
    const ManifoldField s = rearrange_field_M(f);
    for (std::size_t k = 1; k < s.values.size(); ++k) CHECK(s.values[k] <= s.values[k - 1]);
  }
}

TEST_CASE("Gram Jacobian against Eigen determinants") {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 3 + rng.below(3), n = 1 + rng.below(m);
    LinearMapMatrix a{m, n, std::vector<double>(m * n)};
    Eigen::MatrixXd e(m, n);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < n; ++c) e(static_cast<long>(r), static_cast<long>(c)) = a.entries[r * n + c] = rng.uniform(-1, 1);
    const double expect = std::sqrt(std::max(0.0, (e.transpose() * e).determinant()));
    CHECK(gram_jacobian(a) == doctest::Approx(expect).epsilon(1e-10));
  }
  // rank deficient
  LinearMapMatrix d{3, 2, {1, 2, 2, 4, 3, 6}};
  CHECK(gram_jacobian(d) == 0.0);
  // isometry invariance: the first two columns of a rotation
  const double c = std::cos(0.3), s = std::sin(0.3);
  LinearMapMatrix q{3, 2, {c, -s, s, c, 0, 0}};
  CHECK(gram_jacobian(q) == doctest::Approx(1.0));
  CHECK_THROWS(gram_jacobian(LinearMapMatrix{2, 3, std::vector<double>(6)}));
}

TEST_CASE("manifold isoperimetry and Polya-Szego") {
  const auto g = polar(200, 2.0);
  std::vector<std::uint8_t> annulus(200, 0);
  for (std::size_t i = 80; i < 140; ++i) annulus[i] = 1;
  CHECK(check_isoperimetric_M(*g, annulus).pass);
  std::vector<double> bump(200, 0.0);
  for (std::size_t i = 0; i < 200; ++i) {
    const double u = (g->center(i) - 1.0) / 0.4;
    if (std::abs(u) < 1.0) bump[i] = (1 - u * u) * (1 - u * u);
  }
  CHECK(check_polya_szego_M(ManifoldField::radial(g, bump), 2.0).pass);
  const WeightedRadialGrid wavy = WeightedRadialGrid::from_weight(
      [](double r) { return 1.0 + 0.5 * std::sin(6.0 * r); }, WeightedRadialGrid::uniform_edges(0.0, 2.0, 200), 1.0);
  CHECK_FALSE(wavy.phi_non_decreasing());
  CHECK_FALSE(check_isoperimetric_M(wavy, annulus).judged);
}

TEST_CASE("negative fields are rejected") {
  const auto g = polar(4, 1.0);
  CHECK_THROWS(rearrange_field_M(ManifoldField(g, {1.0, -0.5, 0.0, 0.0})));
}
