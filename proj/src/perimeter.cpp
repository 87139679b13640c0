#include "symmcal/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symmcal/distance.hpp"
#include "symmcal/rearrange.hpp"
#include "symmcal/simd.hpp"

namespace symmcal {

std::string to_string(PerimeterMethod m) {
  switch (m) {
    case PerimeterMethod::FaceCount:
      return "face_count";
    case PerimeterMethod::SmoothedGradient:
      return "smoothed_gradient";
    case PerimeterMethod::Minkowski:
      return "minkowski";
    case PerimeterMethod::Convolution:
      return "convolution";
  }
  return "";
}

PerimeterMethod parse_perimeter_method(const std::string& s) {
  for (auto m : {PerimeterMethod::FaceCount, PerimeterMethod::SmoothedGradient,
                 PerimeterMethod::Minkowski, PerimeterMethod::Convolution})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown perimeter method: " + s);
}

double default_delta(const Grid& g) { return 4.0 * g.mean_spacing(); }

PerimeterEstimate perimeter_face_count(const RegionMask& a) {
  const Grid& g = a.grid;
  const auto& m = a.members;
  double total = 0.0;
  for (int ax = 0; ax < g.dim(); ++ax) {
    const auto ua = static_cast<std::size_t>(ax);
    const std::size_t n = g.shape()[ua];
    const std::size_t st = g.stride(ax);
    const std::size_t outer = g.size() / (n * st);
    std::size_t faces = 0;
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < st; ++j) {
        const std::size_t base = o * n * st + j;
        std::uint8_t prev = 0;
        for (std::size_t q = 0; q < n; ++q) {
          const std::uint8_t cur = m[base + q * st];
          faces += cur != prev;
          prev = cur;
        }
        faces += prev;
      }
    }
    // face area: product of the other spacings
    total += static_cast<double>(faces) * g.cell_volume() / g.spacing()[ua];
  }
  if (g.dim() == 1) total /= g.cell_volume();
  return {PerimeterMethod::FaceCount, total, 0.0};
}

namespace {

bool on_outer_layer(const Grid& g, std::size_t flat) {
  const Index3 i = g.unravel3(flat);
  const Index3 s = g.shape3();
  for (int a = kMaxDim - g.dim(); a < kMaxDim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (i[ua] == 0 || i[ua] + 1 == s[ua]) return true;
  }
  return false;
}

void require_resolved(const Grid& g, double delta, const char* what) {
  if (!(delta >= 2.0 * g.max_spacing() * (1.0 - 1e-12)))
    throw UnderResolved(std::string(what) + ": parameter below two cells");
}

// Ring volume for radius delta from squared distances to member centres.
double ring_volume(const RegionMask& a, const std::vector<double>& d2, double delta) {
  const Grid& g = a.grid;
  const double h = g.mean_spacing();
  const double reach = delta / h + kMinkowskiEnvelope + 0.5;
  double covered = 0.0;
  for (std::size_t i = 0; i < d2.size(); ++i) {
    if (a.members[i] || d2[i] == std::numeric_limits<double>::infinity()) continue;
    const double c = std::clamp(reach - std::sqrt(d2[i]) / h, 0.0, 1.0);
    if (c == 0.0) continue;
    if (on_outer_layer(g, i)) throw MarginOverflow("Minkowski ring reaches the grid edge");
    covered += c;
  }
  return covered * g.cell_volume();
}

}  // namespace

double minkowski_ring_volume(const RegionMask& a, double delta) {
  require_resolved(a.grid, delta, "perimeter_minkowski");
  if (a.empty()) return 0.0;
  return ring_volume(a, squared_distance_to_members(a), delta);
}

PerimeterEstimate perimeter_minkowski(const RegionMask& a, double delta) {
  return {PerimeterMethod::Minkowski, minkowski_ring_volume(a, delta) / delta, delta};
}

PerimeterEstimate perimeter_convolution(const RegionMask& a, double delta) {
  const Grid& g = a.grid;
  const int n = g.dim();
  if (n < 2) throw std::invalid_argument("perimeter_convolution needs n >= 2");
  require_resolved(g, delta, "perimeter_convolution");
  if (a.empty()) return {PerimeterMethod::Convolution, 0.0, delta};
  const double h = g.mean_spacing();
  const int pad = kMaxDim - n;
  Offset3 reach{0, 0, 0};
  for (int ax = 0; ax < n; ++ax)
    reach[static_cast<std::size_t>(pad + ax)] =
        static_cast<long>(std::ceil(delta / g.spacing()[static_cast<std::size_t>(ax)] + 1.0));
  const auto count = static_cast<double>(a.count());
  const std::uint8_t* m = a.members.data();
  double weighted_outside = 0.0;
  for (long i = -reach[0]; i <= reach[0]; ++i)
    for (long j = -reach[1]; j <= reach[1]; ++j)
      for (long k = -reach[2]; k <= reach[2]; ++k) {
        const Offset3 o{i, j, k};
        double r2 = 0.0;
        for (int ax = 0; ax < n; ++ax) {
          const double x = static_cast<double>(o[static_cast<std::size_t>(pad + ax)]) *
                           g.spacing()[static_cast<std::size_t>(ax)];
          r2 += x * x;
        }
        const double w = std::clamp(delta / h - std::sqrt(r2) / h + 0.5, 0.0, 1.0);
        if (w == 0.0) continue;
        std::size_t pairs = 0;
        detail::for_each_shifted_run(g, o, [&](std::size_t dst, std::size_t src, std::size_t len) {
          std::size_t c = 0;
          for (std::size_t t = 0; t < len; ++t) c += m[dst + t] & m[src + t];
          pairs += c;
        });
        weighted_outside += w * (count - static_cast<double>(pairs));
      }
  const double cv = g.cell_volume();
  const double cn = static_cast<double>(n + 1) / unit_ball_volume(n - 1);
  const double value = cn / std::pow(delta, n + 1) * weighted_outside * cv * cv;
  return {PerimeterMethod::Convolution, value, delta};
}

PerimeterEstimate perimeter_smoothed_gradient(const RegionMask& a, double width) {
  require_resolved(a.grid, width, "perimeter_smoothed_gradient");
  if (a.empty()) return {PerimeterMethod::SmoothedGradient, 0.0, width};
  const ScalarField phi = gaussian_blur(indicator(a), width);
  const double value = lp_norm(gradient_magnitude(phi), 1.0);
  return {PerimeterMethod::SmoothedGradient, value, width};
}

namespace {

double two_scale_perimeter(const RegionMask& a, double delta) {
  if (a.empty()) return 0.0;
  const auto d2 = squared_distance_to_members(a);
  const double m1 = ring_volume(a, d2, delta) / delta;
  const double m2 = ring_volume(a, d2, 2.0 * delta) / (2.0 * delta);
  return 2.0 * m1 - m2;
}

}  // namespace

CheckResult coarea_check(const ScalarField& f, const std::vector<double>& thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (!(thresholds[i] > (i == 0 ? 0.0 : thresholds[i - 1])))
      throw std::invalid_argument("coarea thresholds must be positive and strictly increasing");
  const double lhs = lp_norm(gradient_magnitude(f), 1.0);
  const double delta = default_delta(f.grid);
  std::vector<double> per(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    per[i] = two_scale_perimeter(super_level_set(f, thresholds[i]), delta);
  double rhs = 0.0;
  if (!thresholds.empty()) rhs = thresholds[0] * per[0];
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    rhs += 0.5 * (thresholds[i] - thresholds[i - 1]) * (per[i] + per[i - 1]);
  return make_check("coarea", lhs, rhs, -std::abs(lhs - rhs), 0.02 * check_scale(lhs, rhs));
}

CheckResult coarea_check(const ScalarField& f, int count) {
  if (count < 1) throw std::invalid_argument("coarea_check needs at least one threshold");
  const double top = f.max();
  if (!(top > 0.0)) return make_check("coarea", lp_norm(gradient_magnitude(f), 1.0), 0.0,
                                      -lp_norm(gradient_magnitude(f), 1.0), 0.0);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = top * (i + 1) / count;
  return coarea_check(f, t);
}

double coarea_gap(const CheckResult& r) {
  const double m = std::max(std::abs(r.lhs), std::abs(r.rhs));
  return m == 0.0 ? 0.0 : std::abs(r.lhs - r.rhs) / m;
}

double coarea_density(const ScalarField& f, double t, double dt, std::optional<double> eps) {
  if (!(dt > 0.0)) throw std::invalid_argument("coarea_density needs dt > 0");
  const ScalarField grad = gradient_magnitude(f);
  double cut = 0.0;
  if (eps) {
    if (!(*eps > 0.0)) throw std::invalid_argument("coarea_density needs eps > 0");
    cut = *eps;
  } else {
    cut = 1e-6 * grad.max();
  }
  std::size_t cells = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    cells += f.values[i] > t && f.values[i] <= t + dt && grad.values[i] > cut;
  return static_cast<double>(cells) * f.grid.cell_volume() / dt;
}

RegionMask minkowski_sum(const RegionMask& a, const RegionMask& b) {
  require_same_grid(a.grid, b.grid);
  const Grid& g = a.grid;
  RegionMask out(g);
  if (a.empty() || b.empty()) return out;
  const Index3 s = g.shape3();
  Offset3 alo{}, ahi{}, blo{}, bhi{};
  alo.fill(std::numeric_limits<long>::max());
  blo.fill(std::numeric_limits<long>::max());
  ahi.fill(std::numeric_limits<long>::min());
  bhi.fill(std::numeric_limits<long>::min());
  std::vector<Offset3> offsets;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (a.members[i]) {
      const Index3 c = g.unravel3(i);
      for (std::size_t ax = 0; ax < 3; ++ax) {
        alo[ax] = std::min(alo[ax], static_cast<long>(c[ax]));
        ahi[ax] = std::max(ahi[ax], static_cast<long>(c[ax]));
      }
    }
    if (b.members[i]) {
      const Offset3 o = detail::kernel_offset(g, i);
      offsets.push_back(o);
      for (std::size_t ax = 0; ax < 3; ++ax) {
        blo[ax] = std::min(blo[ax], o[ax]);
        bhi[ax] = std::max(bhi[ax], o[ax]);
      }
    }
  }
  for (std::size_t ax = 0; ax < 3; ++ax)
    if (alo[ax] + blo[ax] < 0 || ahi[ax] + bhi[ax] >= static_cast<long>(s[ax]))
      throw MarginOverflow("Minkowski sum leaves the grid");
  const auto& K = simd::kernels();
  for (const auto& o : offsets)
    detail::for_each_shifted_run(g, o, [&](std::size_t dst, std::size_t src, std::size_t len) {
      K.or_bytes(out.members.data() + dst, a.members.data() + src, len);
    });
  return out;
}

CheckResult check_brunn_minkowski(const RegionMask& a, const RegionMask& b) {
  const double inv_n = 1.0 / static_cast<double>(a.grid.dim());
  const double lhs = std::pow(volume(a), inv_n) + std::pow(volume(b), inv_n);
  const double rhs = std::pow(volume(minkowski_sum(a, b)), inv_n);
  // digital sums lose one cell per axis: n + m cells become n + m - 1
  return make_check("brunn_minkowski", lhs, rhs, rhs - lhs, std::pow(a.grid.cell_volume(), inv_n) * (1.0 + 1e-9));
}

CheckResult check_sharp_isoperimetric(const RegionMask& a, std::optional<double> delta) {
  const int n = a.grid.dim();
  if (n < 2) throw std::invalid_argument("check_sharp_isoperimetric needs n >= 2");
  const double d = delta.value_or(default_delta(a.grid));
  const double nn = static_cast<double>(n);
  const double cn = nn * std::pow(unit_ball_volume(n), 1.0 / nn);
  const double lhs = perimeter_minkowski(a, d).value;
  const double rhs = cn * std::pow(volume(a), (nn - 1.0) / nn);
  return make_check("sharp_isoperimetric", lhs, rhs, lhs - rhs, 0.03 * rhs);
}

CheckResult check_isoperimetric_mask(const RegionMask& a, std::optional<double> delta) {
  if (a.grid.dim() < 2) throw std::invalid_argument("check_isoperimetric_mask needs n >= 2");
  const double d = delta.value_or(default_delta(a.grid));
  const double rhs = perimeter_minkowski(a, d).value;
  const double lhs = perimeter_minkowski(rearrange_mask(a), d).value;
  return make_check("isoperimetric_mask", lhs, rhs, rhs - lhs, 0.03 * check_scale(lhs, rhs));
}

CheckResult check_polya_szego(const ScalarField& f, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::domain_error("check_polya_szego needs p in [1, inf)");
  const double rhs = lp_norm(gradient_magnitude(f), p);
  const double lhs = lp_norm(gradient_magnitude(rearrange_field(f)), p);
  std::string name = p == 1.0 ? "polya_szego_p1" : p == 2.0 ? "polya_szego_p2" : "polya_szego";
  return make_check(name, lhs, rhs, rhs - lhs, 0.02 * check_scale(lhs, rhs));
}

double polygon_signed_area(const Polygon& p) {
  const auto& v = p.vertices;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

double polygon_length(const Polygon& p) {
  const auto& v = p.vertices;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return s;
}

namespace {

using P2 = std::array<double, 2>;

double orient(const P2& a, const P2& b, const P2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_segment(const P2& a, const P2& b, const P2& c) {
  return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
}

bool segments_touch(const P2& a, const P2& b, const P2& c, const P2& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool polygon_is_simple(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] == v[(i + 1) % n]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = v[i];
    const P2& b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const P2& c = v[j];
      const P2& d = v[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // adjacent edges share one endpoint; they must not fold back onto each other
        const P2& shared = j == i + 1 ? b : a;
        const P2& x = j == i + 1 ? a : b;
        const P2& y = j == i + 1 ? d : c;
        if (orient(x, shared, y) == 0 &&
            ((y[0] - shared[0]) * (x[0] - shared[0]) + (y[1] - shared[1]) * (x[1] - shared[1])) > 0)
          return false;
        continue;
      }
      if (segments_touch(a, b, c, d)) return false;
    }
  }
  return true;
}

CheckResult check_planar_polygon(const Polygon& poly) {
  if (poly.vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  if (!polygon_is_simple(poly)) throw std::invalid_argument("polygon is self-intersecting");
  Polygon p = poly;
  if (polygon_signed_area(p) < 0.0) std::reverse(p.vertices.begin(), p.vertices.end());
  const double area = polygon_signed_area(p);
  const double len = polygon_length(p);
  const double lhs = 4.0 * std::numbers::pi * area;
  const double rhs = len * len;
  return make_check("planar_polygon", lhs, rhs, rhs - lhs, 1e-9 * check_scale(lhs, rhs));
}

}  // namespace symmcal
