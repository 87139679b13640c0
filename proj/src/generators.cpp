#include "symmcal/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace symmcal {

namespace {

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

Polygon random_convex_polygon(Rng& rng, double cx, double cy, double rmin, double rmax) {
  const double a = rng.uniform(rmin, rmax);
  const double b = rng.uniform(rmin, rmax);
  const double rot = rng.uniform(0.0, std::numbers::pi);
  const auto count = 7 + rng.below(9);
  std::vector<P2> pts;
  while (true) {
    pts.clear();
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double x = a * std::cos(t);
      const double y = b * std::sin(t);
      pts.push_back({cx + x * std::cos(rot) - y * std::sin(rot), cy + x * std::sin(rot) + y * std::cos(rot)});
    }
    auto h = hull(pts);
    if (h.size() >= 3) return Polygon{std::move(h)};
  }
}

Polygon random_star_polygon(Rng& rng) {
  const auto n = 3 + rng.below(38);
  std::vector<double> ang(n);
  for (auto& t : ang) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::sort(ang.begin(), ang.end());
  ang.erase(std::unique(ang.begin(), ang.end()), ang.end());
  Polygon p;
  for (double t : ang) {
    const double r = rng.uniform(0.1, 1.0);
    p.vertices.push_back({r * std::cos(t), r * std::sin(t)});
  }
  // all angular gaps below pi keep the origin inside; otherwise add a hub vertex
  bool wide = false;
  for (std::size_t i = 0; i < ang.size(); ++i) {
    const double next = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2.0 * std::numbers::pi;
    if (next - ang[i] >= std::numbers::pi) wide = true;
  }
  if (wide || p.vertices.size() < 3) {
    Polygon q;
    for (std::size_t i = 0; i < ang.size(); ++i) {
      const double next = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2.0 * std::numbers::pi;
      q.vertices.push_back(p.vertices[i]);
      if (next - ang[i] >= std::numbers::pi) q.vertices.push_back({0.0, 0.0});
    }
    if (q.vertices.size() < 3) return regular_polygon(3 + n % 5, 0.5);
    return q;
  }
  return p;
}

Polygon regular_polygon(std::size_t n, double r) {
  Polygon p;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    p.vertices.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return p;
}

RegionMask rasterize(const Grid& grid, const Polygon& p) {
  if (grid.dim() != 2) throw std::invalid_argument("rasterize needs a 2-D grid");
  RegionMask m(grid);
  const auto centers = cell_centers(grid);
  const auto& v = p.vertices;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double x = centers[k][0];
    const double y = centers[k][1];
    bool in = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
      if ((v[i][1] > y) != (v[j][1] > y) &&
          x < (v[j][0] - v[i][0]) * (y - v[i][1]) / (v[j][1] - v[i][1]) + v[i][0])
        in = !in;
    }
    m.members[k] = in ? 1 : 0;
  }
  return m;
}

RegionMask disk_mask(const Grid& grid, double cx, double cy, double r) {
  RegionMask m(grid);
  const auto centers = cell_centers(grid);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double dx = centers[k][0] - cx;
    const double dy = centers[k][1] - cy;
    m.members[k] = dx * dx + dy * dy < r * r ? 1 : 0;
  }
  return m;
}

RegionMask rectangle_mask(const Grid& grid, double cx, double cy, double a, double b) {
  RegionMask m(grid);
  const auto centers = cell_centers(grid);
  for (std::size_t k = 0; k < centers.size(); ++k)
    m.members[k] = std::abs(centers[k][0] - cx) < 0.5 * a && std::abs(centers[k][1] - cy) < 0.5 * b;
  return m;
}

ScalarField random_compact_source(const Grid& grid, const RegionMask& inside, Rng& rng, int k) {
  require_same_grid(grid, inside.grid);
  const auto centers = cell_centers(grid);
  // extent of the inside mask
  Point lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (inside.members[i])
      for (std::size_t a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], centers[i][a]);
        hi[a] = std::max(hi[a], centers[i][a]);
      }
  const auto n = static_cast<std::size_t>(grid.dim());
  double span = 1e300;
  for (std::size_t a = 0; a < n; ++a) span = std::min(span, hi[a] - lo[a]);
  ScalarField f(grid);
  for (int b = 0; b < k; ++b) {
    const double w = rng.uniform(0.1, 0.3) * span;
    Point c{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < n; ++a) c[a] = rng.uniform(lo[a] + w, hi[a] - w);
    const double amp = rng.uniform(0.5, 1.5);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double r2 = 0.0;
      for (std::size_t a = 0; a < n; ++a) r2 += (centers[i][a] - c[a]) * (centers[i][a] - c[a]);
      const double s = 1.0 - r2 / (w * w);
      if (s > 0.0) f.values[i] += amp * s * s;
    }
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (!inside.members[i]) f.values[i] = 0.0;
  return f;
}

manifold::ManifoldField random_manifold_field(std::shared_ptr<const manifold::WeightedRadialGrid> g,
                                              Rng& rng) {
  const std::size_t m = g->radial_cells();
  const std::size_t q = g->cross_cells();
  const double r0 = g->r_edges().front();
  const double r1 = g->r_max();
  const int bumps = 1 + static_cast<int>(rng.below(3));
  std::vector<double> c(static_cast<std::size_t>(bumps)), w(c.size()), a(c.size());
  for (std::size_t b = 0; b < c.size(); ++b) {
    c[b] = rng.uniform(r0, r1);
    w[b] = rng.uniform(0.05, 0.3) * (r1 - r0);
    a[b] = rng.uniform(0.5, 1.5);
  }
  std::vector<double> mod(q);
  for (auto& x : mod) x = rng.uniform(0.5, 1.0);
  std::vector<double> v(g->size(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = g->center(i);
    double s = 0.0;
    for (std::size_t b = 0; b < c.size(); ++b) {
      const double u = 1.0 - (r - c[b]) * (r - c[b]) / (w[b] * w[b]);
      if (u > 0.0) s += a[b] * u * u;
    }
    for (std::size_t j = 0; j < q; ++j) v[i * q + j] = s * mod[j];
  }
  return manifold::ManifoldField(std::move(g), std::move(v));
}

}  // namespace symmcal
