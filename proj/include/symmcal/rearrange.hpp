#pragma once

// Exact cell-level symmetric decreasing rearrangement on Euclidean grids.

#include <cstddef>
#include <memory>
#include <vector>

#include "symmcal/check.hpp"
#include "symmcal/grid.hpp"

namespace symmcal {

/// Cells sorted by distance of the centre from the origin; equal distances
/// keep ascending flat index, which is lexicographic coordinate order.
struct RadialOrder {
  Grid grid;
  std::vector<std::size_t> order;
  /// rank[cell] = position of cell in `order`.
  std::vector<std::size_t> rank;
  /// Squared distance of each position in `order` (length units squared).
  std::vector<double> radius_sq;
};

RadialOrder build_radial_order(const Grid& grid);
/// Shared read-only order, built once per distinct grid.
std::shared_ptr<const RadialOrder> radial_order(const Grid& grid);

DistributionTable distribution_function(const ScalarField& f, const std::vector<double>& thresholds);

/// Sorted distinct values of f.
std::vector<double> distinct_values(const ScalarField& f);

RegionMask rearrange_mask(const RegionMask& a);
ScalarField rearrange_field(const ScalarField& f);

CheckResult rearranged_char_equals_char_of_rearranged(const RegionMask& a);
CheckResult level_set_commutes(const ScalarField& f, double t);

/// f(x) rebuilt as the integral over t of the indicator of {f > t} at x.
double layer_cake_eval(const ScalarField& f, std::size_t cell);

/// p * integral of mu_f(t) t^{p-1} dt, evaluated exactly between distinct
/// values. Equals ||f||_p^p.
double cavalieri_power_integral(const ScalarField& f, double p);

/// Correctly rounded sum of the inputs.
double exact_sum(const std::vector<double>& terms);

}  // namespace symmcal
