#pragma once

#include <vector>

#include "symmcal/grid.hpp"

namespace symmcal {

/// Exact squared Euclidean distance from every cell centre to the nearest
/// member centre (separable lower-envelope transform). Infinity when the
/// mask is empty.
std::vector<double> squared_distance_to_members(const RegionMask& mask);

}  // namespace symmcal
