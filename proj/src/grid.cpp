#include "symmcal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "symmcal/random.hpp"
#include "symmcal/simd.hpp"

namespace symmcal {

Grid::Grid(std::vector<std::size_t> shape, std::vector<double> spacing,
           std::vector<double> origin)
    : shape_(std::move(shape)), spacing_(std::move(spacing)), origin_(std::move(origin)) {
  if (shape_.empty() || shape_.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (spacing_.size() != shape_.size())
    throw std::invalid_argument("spacing length must equal grid dimension");
  if (origin_.empty()) origin_.assign(shape_.size(), 0.0);
  if (origin_.size() != shape_.size())
    throw std::invalid_argument("origin length must equal grid dimension");
  size_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (shape_[a] < 1) throw std::invalid_argument("grid shape entries must be >= 1");
    if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a]))
      throw std::invalid_argument("grid spacing must be positive and finite");
    if (!std::isfinite(origin_[a])) throw std::invalid_argument("grid origin must be finite");
    size_ *= shape_[a];
    cell_volume_ *= spacing_[a];
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t a = shape_.size() - 1; a > 0; --a) strides_[a - 1] = strides_[a] * shape_[a];
}

Grid Grid::cube(int dim, std::size_t size, double extent) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  const auto d = static_cast<std::size_t>(dim);
  return Grid(std::vector<std::size_t>(d, size),
              std::vector<double>(d, extent / static_cast<double>(size)),
              std::vector<double>(d, 0.0));
}

double Grid::mean_spacing() const {
  return std::pow(cell_volume_, 1.0 / static_cast<double>(shape_.size()));
}

double Grid::max_spacing() const { return *std::max_element(spacing_.begin(), spacing_.end()); }

bool Grid::isotropic() const {
  return std::all_of(spacing_.begin(), spacing_.end(),
                     [&](double h) { return h == spacing_.front(); });
}

Index3 Grid::shape3() const {
  Index3 s{1, 1, 1};
  const std::size_t pad = static_cast<std::size_t>(kMaxDim) - shape_.size();
  for (std::size_t a = 0; a < shape_.size(); ++a) s[pad + a] = shape_[a];
  return s;
}

Index3 Grid::unravel3(std::size_t flat) const {
  const Index3 s = shape3();
  Index3 idx{};
  idx[2] = flat % s[2];
  flat /= s[2];
  idx[1] = flat % s[1];
  idx[0] = flat / s[1];
  return idx;
}

bool Grid::operator==(const Grid& other) const {
  return shape_ == other.shape_ && spacing_ == other.spacing_ && origin_ == other.origin_;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch();
}

ScalarField::ScalarField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("field value count does not match grid size");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("field values must be finite");
}

double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }
double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }

bool ScalarField::boundary_is_zero() const {
  const Index3 s = grid.shape3();
  const int pad = kMaxDim - grid.dim();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == 0.0) continue;
    const Index3 i = grid.unravel3(k);
    for (int a = pad; a < kMaxDim; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      if (i[ua] == 0 || i[ua] + 1 == s[ua]) return false;
    }
  }
  return true;
}

RegionMask::RegionMask(Grid g) : grid(std::move(g)), members(grid.size(), 0) {}

RegionMask::RegionMask(Grid g, std::vector<std::uint8_t> m) : grid(std::move(g)), members(std::move(m)) {
  if (members.size() != grid.size())
    throw std::invalid_argument("mask member count does not match grid size");
  for (auto& b : members) b = b ? 1 : 0;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(members.begin(), members.end(), std::uint8_t{1}));
}

std::vector<Point> cell_centers(const Grid& grid) {
  std::vector<Point> out(grid.size(), Point{0.0, 0.0, 0.0});
  const int pad = kMaxDim - grid.dim();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Index3 i = grid.unravel3(k);
    for (int a = 0; a < grid.dim(); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      out[k][ua] = grid.origin()[ua] + grid.relative_coordinate(a, i[static_cast<std::size_t>(pad + a)]);
    }
  }
  return out;
}

double volume(const RegionMask& mask) {
  return static_cast<double>(mask.count()) * mask.grid.cell_volume();
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume needs n >= 1");
  const double half = 0.5 * static_cast<double>(n);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

ScalarField gradient_magnitude(const ScalarField& f) {
  const Grid& g = f.grid;
  const auto& K = simd::kernels();
  ScalarField out(g);
  const double* src = f.values.data();
  double* dst = out.values.data();
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const std::size_t n = g.shape()[ua];
    if (n < 2) continue;
    const double h = g.spacing()[ua];
    const std::size_t st = g.stride(a);
    const std::size_t outer = g.size() / (n * st);
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * n * st;
      if (st == 1) {
        // last axis: one contiguous row
        double* row = dst + base;
        const double* f0 = src + base;
        K.accum_sq_diff(row, f0 + 1, f0, 1.0 / h, 1);
        if (n > 2) K.accum_sq_diff(row + 1, f0 + 2, f0, 0.5 / h, n - 2);
        K.accum_sq_diff(row + n - 1, f0 + n - 1, f0 + n - 2, 1.0 / h, 1);
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = i + 1 < n ? i + 1 : i;
        const std::size_t lo = i > 0 ? i - 1 : i;
        const double c = 1.0 / (static_cast<double>(hi - lo) * h);
        K.accum_sq_diff(dst + base + i * st, src + base + hi * st, src + base + lo * st, c, st);
      }
    }
  }
  K.sqrt_inplace(dst, out.values.size());
  return out;
}

namespace detail {

Offset3 kernel_offset(const Grid& grid, std::size_t flat) {
  const Index3 i = grid.unravel3(flat);
  const Index3 s = grid.shape3();
  Offset3 o{};
  for (std::size_t a = 0; a < 3; ++a)
    o[a] = static_cast<long>(i[a]) - static_cast<long>(s[a] / 2);
  return o;
}

}  // namespace detail

ScalarField convolve(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid);
  const auto& K = simd::kernels();
  ScalarField out(f.grid);
  const double cv = f.grid.cell_volume();
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const double w = g.values[k];
    if (w == 0.0) continue;
    detail::for_each_shifted_run(f.grid, detail::kernel_offset(f.grid, k),
                                 [&](std::size_t dst, std::size_t src, std::size_t len) {
                                   K.axpy(out.values.data() + dst, w * cv, f.values.data() + src, len);
                                 });
  }
  return out;
}

ScalarField gaussian_blur(const ScalarField& f, double sigma, double radius_sigmas) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_blur needs sigma > 0");
  const Grid& g = f.grid;
  const auto& K = simd::kernels();
  ScalarField cur = f;
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const std::size_t n = g.shape()[ua];
    const double h = g.spacing()[ua];
    const auto r = static_cast<long>(std::floor(radius_sigmas * sigma / h));
    std::vector<double> w(static_cast<std::size_t>(2 * r + 1));
    double total = 0.0;
    for (long o = -r; o <= r; ++o) {
      const double x = static_cast<double>(o) * h;
      w[static_cast<std::size_t>(o + r)] = std::exp(-x * x / (2.0 * sigma * sigma));
      total += w[static_cast<std::size_t>(o + r)];
    }
    for (double& v : w) v /= total;
    ScalarField next(g);
    const std::size_t st = g.stride(a);
    const std::size_t outer = g.size() / (n * st);
    const auto ln = static_cast<long>(n);
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * n * st;
      for (long i = 0; i < ln; ++i) {
        double* dst = next.values.data() + base + static_cast<std::size_t>(i) * st;
        const long lo = std::max(-r, i - ln + 1);
        const long hi = std::min(r, i);
        if (st == 1) {
          double acc = 0.0;
          for (long k = lo; k <= hi; ++k)
            acc += w[static_cast<std::size_t>(k + r)] * cur.values[base + static_cast<std::size_t>(i - k)];
          *dst = acc;
        } else {
          for (long k = lo; k <= hi; ++k)
            K.axpy(dst, w[static_cast<std::size_t>(k + r)],
                   cur.values.data() + base + static_cast<std::size_t>(i - k) * st, st);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

namespace {

// Quintic smoothstep taper: 1 on [0, a], 0 on [b, inf).
double taper(double u, double a, double b) {
  if (u <= a) return 1.0;
  if (u >= b) return 0.0;
  const double s = 1.0 - (u - a) / (b - a);
  return s * s * s * (s * (s * 6.0 - 15.0) + 10.0);
}

}  // namespace

ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed, int k) {
  if (k < 1) throw std::invalid_argument("random_smooth_field needs k >= 1");
  Rng rng(seed);
  const int n = grid.dim();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> half(un);
  double min_half = std::numeric_limits<double>::max();
  for (std::size_t a = 0; a < un; ++a) {
    half[a] = 0.5 * static_cast<double>(grid.shape()[a]) * grid.spacing()[a];
    min_half = std::min(min_half, half[a]);
  }
  struct Bump {
    Point c;
    double inv2s2;
    double amp;
  };
  std::vector<Bump> bumps(static_cast<std::size_t>(k));
  for (auto& b : bumps) {
    b.c = Point{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < un; ++a) b.c[a] = rng.uniform(-0.4, 0.4) * half[a];
    const double sigma = rng.uniform(0.08, 0.2) * min_half;
    b.inv2s2 = 1.0 / (2.0 * sigma * sigma);
    b.amp = rng.uniform(0.5, 1.5);
  }
  ScalarField out(grid);
  const int pad = kMaxDim - n;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Index3 i = grid.unravel3(idx);
    Point x{0.0, 0.0, 0.0};
    double w = 1.0;
    bool ring = false;
    for (std::size_t a = 0; a < un; ++a) {
      const std::size_t ia = i[static_cast<std::size_t>(pad) + a];
      if (ia == 0 || ia + 1 == grid.shape()[a]) ring = true;
      x[a] = grid.relative_coordinate(static_cast<int>(a), ia);
      w *= taper(std::abs(x[a]) / half[a], 0.75, 0.95);
    }
    if (ring || w == 0.0) continue;
    double v = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (std::size_t a = 0; a < un; ++a) r2 += (x[a] - b.c[a]) * (x[a] - b.c[a]);
      v += b.amp * std::exp(-r2 * b.inv2s2);
    }
    out.values[idx] = v * w;
  }
  return out;
}

RegionMask super_level_set(const ScalarField& f, double t) {
  RegionMask m(f.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k) m.members[k] = f.values[k] > t ? 1 : 0;
  return m;
}

RegionMask sub_level_set(const ScalarField& f, double t) {
  RegionMask m(f.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k) m.members[k] = f.values[k] <= t ? 1 : 0;
  return m;
}

ScalarField indicator(const RegionMask& mask) {
  ScalarField f(mask.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = mask.members[k] ? 1.0 : 0.0;
  return f;
}

double integral(const ScalarField& f) {
  return simd::kernels().sum(f.values.data(), f.values.size()) * f.grid.cell_volume();
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid);
  return simd::kernels().dot(f.values.data(), g.values.data(), f.values.size()) *
         f.grid.cell_volume();
}

double lp_norm(const Grid& grid, const std::vector<double>& values, double p) {
  const auto& K = simd::kernels();
  if (std::isinf(p)) return values.empty() ? 0.0 : K.max_abs(values.data(), values.size());
  if (p < 1.0) throw std::domain_error("lp_norm needs p >= 1");
  const double cv = grid.cell_volume();
  if (p == 1.0) return K.sum_abs(values.data(), values.size()) * cv;
  if (p == 2.0) return std::sqrt(K.sum_sq(values.data(), values.size()) * cv);
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * cv, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) { return lp_norm(f.grid, f.values, p); }

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid, a.values);
  simd::kernels().axpy(out.values.data(), -1.0, b.values.data(), out.values.size());
  return out;
}

ScalarField operator*(double s, const ScalarField& a) {
  ScalarField out(a.grid, a.values);
  for (double& v : out.values) v *= s;
  return out;
}

}  // namespace symmcal
