#include <cmath>

#include "doctest.h"
#include "symmcal/inequalities.hpp"
#include "symmcal/random.hpp"
#include "symmcal/rearrange.hpp"

using namespace symmcal;

namespace {

struct Pair {
  ScalarField f, g;
};

Pair random_pair(const Grid& grid, std::uint64_t seed) {
  Rng rng(seed);
  return {random_smooth_field(grid, rng.next(), 1 + static_cast<int>(rng.below(3))),
          random_smooth_field(grid, rng.next(), 1 + static_cast<int>(rng.below(3)))};
}

}  // namespace

TEST_CASE("convex function parsing") {
  CHECK(ConvexFunction::parse("abs_pow:2")(-3.0) == doctest::Approx(9.0));
  CHECK(ConvexFunction::parse("pos_sq")(-3.0) == 0.0);
  CHECK(ConvexFunction::parse("pos_sq")(2.0) == 4.0);
  CHECK(ConvexFunction::parse("smooth_hinge")(0.0) >= 0.0);
  CHECK_THROWS(ConvexFunction::parse("cosh"));
  CHECK_THROWS(ConvexFunction::parse("abs_pow:0.5"));
}

TEST_CASE("Hardy-Littlewood and friends on random fields") {
  const Grid grid = Grid::cube(2, 32, 2.0);
  for (std::uint64_t s = 1; s <= 25; ++s) {
    const auto [f, g] = random_pair(grid, s);
    CHECK(check_hardy_littlewood(f, g).pass);
    CHECK(check_complement_lemma(f, g, 0.5 * g.max()).pass);
    CHECK(check_lp_contraction(f, g, 1.0).pass);
    CHECK(check_lp_contraction(f, g, 2.0).pass);
    CHECK(check_nonexpansivity(f, g, ConvexFunction::abs_power(2.0)).pass);
    CHECK(check_nonexpansivity(f, g, ConvexFunction::positive_square()).pass);
    for (double p : {1.0, 2.0, 3.0}) CHECK(check_lp_preservation(f, p).pass);
  }
}

TEST_CASE("Hardy-Littlewood is an equality for co-monotone pairs") {
  const Grid grid = Grid::cube(2, 32, 2.0);
  const ScalarField f = random_smooth_field(grid, 3, 2);
  ScalarField g = f;
  for (double& v : g.values) v = v * v + v;
  const CheckResult c = check_hardy_littlewood(f, g);
  CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-12));
}

TEST_CASE("L2 contraction against an independent computation") {
  const Grid grid = Grid::cube(1, 5, 5.0);
  const ScalarField f(grid, {0, 3, 1, 0, 0});
  const ScalarField g(grid, {0, 0, 0, 2, 0});
  // f* = {0,1,3,0,0}, g* = {0,0,2,0,0}
  const CheckResult c = check_lp_contraction(f, g, 2.0);
  CHECK(c.lhs == doctest::Approx(std::sqrt(1.0 + 1.0)));
  CHECK(c.rhs == doctest::Approx(std::sqrt(9.0 + 1.0 + 4.0)));
}

TEST_CASE("Riesz with a Gaussian kernel") {
  const Grid odd = Grid::cube(2, 33, 2.0);
  const ScalarField h = gaussian_kernel(odd, 0.1);
  CHECK(integral(h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rearrange_field(h).values == h.values);  // already symmetric decreasing
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto [f, g] = random_pair(odd, s + 100);
    CHECK(check_riesz(f, g, h).pass);
  }
}

TEST_CASE("Sobolev quotient does not increase under rearrangement") {
  const Grid grid = Grid::cube(2, 48, 2.0);
  for (std::uint64_t s = 1; s <= 5; ++s) CHECK(check_sobolev_quotient(random_smooth_field(grid, s, 2), 1.0).pass);
  CHECK_THROWS(check_sobolev_quotient(random_smooth_field(grid, 1, 2), 2.0));
}

TEST_CASE("negative inputs are rejected") {
  const Grid grid = Grid::cube(1, 3, 3.0);
  const ScalarField f(grid, {1, -1, 0});
  const ScalarField g(grid, {1, 1, 0});
  CHECK_THROWS(check_hardy_littlewood(f, g));
}
