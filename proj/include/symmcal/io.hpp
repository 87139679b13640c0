#pragma once

// JSON file formats for fields, masks, radial grids and polygons.

#include <stdexcept>
#include <string>

#include "symmcal/grid.hpp"
#include "symmcal/manifold.hpp"
#include "symmcal/perimeter.hpp"

namespace symmcal {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// {"dim","shape","spacing","origin","values"}
ScalarField field_from_json(const std::string& text);
std::string field_to_json(const ScalarField& f);
/// {"dim","shape","spacing","origin","members"}
RegionMask mask_from_json(const std::string& text);
std::string mask_to_json(const RegionMask& m);
/// {"r_edges","phi","sigma_measure","sigma_cells"}
manifold::WeightedRadialGrid radial_grid_from_json(const std::string& text);
std::string radial_grid_to_json(const manifold::WeightedRadialGrid& g);
/// [[x, y], ...] or {"vertices": [[x, y], ...]}
Polygon polygon_from_json(const std::string& text);
std::string polygon_to_json(const Polygon& p);

inline ScalarField read_field(const std::string& path) { return field_from_json(read_text(path)); }
inline RegionMask read_mask(const std::string& path) { return mask_from_json(read_text(path)); }
inline manifold::WeightedRadialGrid read_radial_grid(const std::string& path) {
  return radial_grid_from_json(read_text(path));
}
inline Polygon read_polygon(const std::string& path) { return polygon_from_json(read_text(path)); }

}  // namespace symmcal
