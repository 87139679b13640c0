#pragma once

// Uniform rectangular grids in 1-3 dimensions and the sampled objects that
// live on them: scalar fields, region masks and distribution tables.
//
// Values are stored row-major with the last axis fastest. Cell centres are
// origin + (i - (shape-1)/2) * h per axis, so the origin is the geometric
// centre of the domain and doubles as the rearrangement centre.

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace symmcal {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;
using Index3 = std::array<std::size_t, kMaxDim>;
using Offset3 = std::array<long, kMaxDim>;

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("fields live on different grids") {}
};

class Grid {
 public:
  Grid(std::vector<std::size_t> shape, std::vector<double> spacing,
       std::vector<double> origin = {});

  /// Cube of `size` cells per axis covering [-extent/2, extent/2]^dim.
  static Grid cube(int dim, std::size_t size, double extent);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<double>& origin() const { return origin_; }

  std::size_t size() const { return size_; }
  double cell_volume() const { return cell_volume_; }
  /// Geometric mean of the spacings; the length scale for isotropic rules.
  double mean_spacing() const;
  double max_spacing() const;
  bool isotropic() const;

  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  /// Shape padded with leading 1s to three axes, for dimension-generic loops.
  Index3 shape3() const;
  Index3 unravel3(std::size_t flat) const;

  /// Offset of cell i along `axis` from the origin, in length units.
  double relative_coordinate(int axis, std::size_t i) const {
    const auto a = static_cast<std::size_t>(axis);
    return (static_cast<double>(i) - 0.5 * static_cast<double>(shape_[a] - 1)) * spacing_[a];
  }

  /// Index of the cell treated as offset zero by kernels and Minkowski sums:
  /// floor(shape/2) per axis, the origin cell when the shape is odd.
  std::size_t kernel_center(int axis) const { return shape_[static_cast<std::size_t>(axis)] / 2; }

  bool operator==(const Grid& other) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> spacing_;
  std::vector<double> origin_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(Grid g);
  ScalarField(Grid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double max() const;
  double min() const;
  /// True when every cell with an index on the outer layer is zero.
  bool boundary_is_zero() const;
};

struct RegionMask {
  Grid grid;
  std::vector<std::uint8_t> members;

  explicit RegionMask(Grid g);
  RegionMask(Grid g, std::vector<std::uint8_t> m);

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool operator==(const RegionMask& other) const {
    return grid == other.grid && members == other.members;
  }
};

struct DistributionTable {
  std::vector<double> thresholds;  ///< strictly increasing
  std::vector<double> measures;    ///< measure of {f > threshold}, non-increasing
};

/// One coordinate per cell, row-major order. Unused trailing entries are 0.
std::vector<Point> cell_centers(const Grid& grid);

double volume(const RegionMask& mask);

/// pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// |grad f| from central differences inside, one-sided differences on the
/// outer layer; axes of extent 1 contribute nothing.
ScalarField gradient_magnitude(const ScalarField& f);

/// (f * g)(x) = sum_y f(y) g(x - y) * cell volume with zero padding. The
/// kernel g is indexed relative to Grid::kernel_center.
ScalarField convolve(const ScalarField& f, const ScalarField& g);

/// Separable Gaussian blur, per-axis kernels normalised to unit sum and
/// truncated at `radius_sigmas` standard deviations; zero padding.
ScalarField gaussian_blur(const ScalarField& f, double sigma, double radius_sigmas = 6.0);

/// Sum of k positive Gaussian bumps with random centres, widths and heights;
/// the outer layer of cells is zeroed.
ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed, int k);

/// {f > t}.
RegionMask super_level_set(const ScalarField& f, double t);
/// {f <= t}.
RegionMask sub_level_set(const ScalarField& f, double t);
ScalarField indicator(const RegionMask& mask);

double integral(const ScalarField& f);
double inner_product(const ScalarField& f, const ScalarField& g);
/// (sum |f|^p * cellvol)^{1/p}; p = infinity gives the max norm.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const Grid& grid, const std::vector<double>& values, double p);

ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

void require_same_grid(const Grid& a, const Grid& b);

namespace detail {

/// Visits every maximal run of cells along the last axis where both the
/// destination cell x and the source cell x - offset lie inside the grid.
/// fn(dst_flat, src_flat, run_length).
template <class Fn>
void for_each_shifted_run(const Grid& grid, const Offset3& offset, Fn&& fn) {
  const Index3 s = grid.shape3();
  auto range = [&](std::size_t axis, long& lo, long& hi) {
    const long n = static_cast<long>(s[axis]);
    lo = offset[axis] > 0 ? offset[axis] : 0;
    hi = offset[axis] < 0 ? n + offset[axis] : n;
  };
  long lo0, hi0, lo1, hi1, lo2, hi2;
  range(0, lo0, hi0);
  range(1, lo1, hi1);
  range(2, lo2, hi2);
  if (hi0 <= lo0 || hi1 <= lo1 || hi2 <= lo2) return;
  const long n1 = static_cast<long>(s[1]);
  const long n2 = static_cast<long>(s[2]);
  const auto len = static_cast<std::size_t>(hi2 - lo2);
  for (long i = lo0; i < hi0; ++i) {
    for (long j = lo1; j < hi1; ++j) {
      const long dst = (i * n1 + j) * n2 + lo2;
      const long src = ((i - offset[0]) * n1 + (j - offset[1])) * n2 + (lo2 - offset[2]);
      fn(static_cast<std::size_t>(dst), static_cast<std::size_t>(src), len);
    }
  }
}

/// Offset of a flat kernel index from the kernel centre, padded to 3 axes.
Offset3 kernel_offset(const Grid& grid, std::size_t flat);

}  // namespace detail

}  // namespace symmcal
