#pragma once

// Seeded test-input generators shared by the suites and the tests.

#include <cstddef>

#include "symmcal/grid.hpp"
#include "symmcal/manifold.hpp"
#include "symmcal/perimeter.hpp"
#include "symmcal/random.hpp"

namespace symmcal {

/// Convex hull of 7-15 points drawn in an ellipse with semi-axes in
/// [rmin, rmax], rotated randomly, centred at (cx, cy).
Polygon random_convex_polygon(Rng& rng, double cx, double cy, double rmin, double rmax);
/// Star-shaped (hence simple) polygon with 3-40 vertices around the origin.
Polygon random_star_polygon(Rng& rng);
/// Counter-clockwise regular n-gon with circumradius r.
Polygon regular_polygon(std::size_t n, double r);

/// Cells whose centre lies inside the polygon (even-odd rule).
RegionMask rasterize(const Grid& grid, const Polygon& p);
/// Cells whose centre lies within distance r of (cx, cy).
RegionMask disk_mask(const Grid& grid, double cx, double cy, double r);
/// Cells whose centre satisfies |x - cx| < a / 2 and |y - cy| < b / 2.
RegionMask rectangle_mask(const Grid& grid, double cx, double cy, double a, double b);

/// Sum of k compact bumps a (1 - |x - c|^2 / w^2)^2 placed inside `inside`
/// (each bump support is contained in the mask's cells).
ScalarField random_compact_source(const Grid& grid, const RegionMask& inside, Rng& rng, int k);

/// Non-negative random field on a radial grid: a few radial bumps modulated
/// across the cross-section, with exact zeros in between.
manifold::ManifoldField random_manifold_field(std::shared_ptr<const manifold::WeightedRadialGrid> g,
                                              Rng& rng);

}  // namespace symmcal
