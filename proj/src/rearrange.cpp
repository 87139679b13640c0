#include "symmcal/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace symmcal {

RadialOrder build_radial_order(const Grid& grid) {
  const std::size_t n = grid.size();
  const int pad = kMaxDim - grid.dim();
  std::vector<double> r2(n, 0.0);
  if (grid.isotropic()) {
    // (2i - s + 1)^2 per axis is an exact integer, so ties are detected exactly.
    std::vector<std::int64_t> key(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const Index3 i = grid.unravel3(k);
      for (int a = 0; a < grid.dim(); ++a) {
        const auto ia = static_cast<std::int64_t>(i[static_cast<std::size_t>(pad + a)]);
        const auto s = static_cast<std::int64_t>(grid.shape()[static_cast<std::size_t>(a)]);
        const std::int64_t d = 2 * ia - s + 1;
        key[k] += d * d;
      }
    }
    const double q = 0.25 * grid.spacing()[0] * grid.spacing()[0];
    for (std::size_t k = 0; k < n; ++k) r2[k] = static_cast<double>(key[k]) * q;
    RadialOrder ro{grid, std::vector<std::size_t>(n), std::vector<std::size_t>(n), {}};
    std::iota(ro.order.begin(), ro.order.end(), std::size_t{0});
    std::stable_sort(ro.order.begin(), ro.order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    ro.radius_sq.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
      ro.rank[ro.order[p]] = p;
      ro.radius_sq[p] = r2[ro.order[p]];
    }
    return ro;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Index3 i = grid.unravel3(k);
    for (int a = 0; a < grid.dim(); ++a) {
      const double x = grid.relative_coordinate(a, i[static_cast<std::size_t>(pad + a)]);
      r2[k] += x * x;
    }
  }
  RadialOrder ro{grid, std::vector<std::size_t>(n), std::vector<std::size_t>(n), {}};
  std::iota(ro.order.begin(), ro.order.end(), std::size_t{0});
  std::stable_sort(ro.order.begin(), ro.order.end(),
                   [&](std::size_t a, std::size_t b) { return r2[a] < r2[b]; });
  ro.radius_sq.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    ro.rank[ro.order[p]] = p;
    ro.radius_sq[p] = r2[ro.order[p]];
  }
  return ro;
}

namespace {

struct GridKey {
  std::vector<std::size_t> shape;
  std::vector<double> spacing;
  std::vector<double> origin;
  bool operator<(const GridKey& o) const {
    return std::tie(shape, spacing, origin) < std::tie(o.shape, o.spacing, o.origin);
  }
};

}  // namespace

std::shared_ptr<const RadialOrder> radial_order(const Grid& grid) {
  static std::mutex mu;
  static std::map<GridKey, std::shared_ptr<const RadialOrder>> cache;
  const GridKey key{grid.shape(), grid.spacing(), grid.origin()};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const RadialOrder>(build_radial_order(grid));
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 64) cache.clear();
  return cache.emplace(key, built).first->second;
}

DistributionTable distribution_function(const ScalarField& f, const std::vector<double>& thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1]))
      throw std::invalid_argument("thresholds must be strictly increasing");
  std::vector<double> sorted = f.values;
  std::sort(sorted.begin(), sorted.end());
  DistributionTable t{thresholds, std::vector<double>(thresholds.size())};
  const double cv = f.grid.cell_volume();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto above = static_cast<std::size_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), thresholds[i]));
    t.measures[i] = static_cast<double>(above) * cv;
  }
  return t;
}

std::vector<double> distinct_values(const ScalarField& f) {
  std::vector<double> v = f.values;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

RegionMask rearrange_mask(const RegionMask& a) {
  const auto ro = radial_order(a.grid);
  RegionMask out(a.grid);
  const std::size_t k = a.count();
  for (std::size_t p = 0; p < k; ++p) out.members[ro->order[p]] = 1;
  return out;
}

ScalarField rearrange_field(const ScalarField& f) {
  for (double v : f.values)
    if (v < 0.0) throw std::domain_error("rearrange_field needs a non-negative field");
  const auto ro = radial_order(f.grid);
  std::vector<std::size_t> by_value(f.values.size());
  std::iota(by_value.begin(), by_value.end(), std::size_t{0});
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](std::size_t a, std::size_t b) { return f.values[a] > f.values[b]; });
  ScalarField out(f.grid);
  for (std::size_t p = 0; p < by_value.size(); ++p) out.values[ro->order[p]] = f.values[by_value[p]];
  return out;
}

namespace {

std::size_t mismatches(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m += a[i] != b[i];
  return m;
}

}  // namespace

CheckResult rearranged_char_equals_char_of_rearranged(const RegionMask& a) {
  const ScalarField lhs = rearrange_field(indicator(a));
  const RegionMask rhs = rearrange_mask(a);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    bad += lhs.values[i] != (rhs.members[i] ? 1.0 : 0.0);
  const double cv = a.grid.cell_volume();
  return make_check("char_of_rearranged", integral(lhs), volume(rhs),
                    -static_cast<double>(bad) * cv, 0.0);
}

CheckResult level_set_commutes(const ScalarField& f, double t) {
  const RegionMask lhs = super_level_set(rearrange_field(f), t);
  const RegionMask rhs = rearrange_mask(super_level_set(f, t));
  const double cv = f.grid.cell_volume();
  return make_check("level_set_commutes", volume(lhs), volume(rhs),
                    -static_cast<double>(mismatches(lhs.members, rhs.members)) * cv, 0.0);
}

double exact_sum(const std::vector<double>& terms) {
  // Shewchuk's non-overlapping partials with round-half-even correction.
  std::vector<double> partials;
  for (double x : terms) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

double layer_cake_eval(const ScalarField& f, std::size_t cell) {
  if (cell >= f.values.size()) throw std::out_of_range("layer_cake_eval: cell index out of range");
  const double fx = f.values[cell];
  const std::vector<double> levels = distinct_values(f);
  // Integrand X_{f>t}(x) is piecewise constant between consecutive levels
  // (and between 0 and the smallest positive level). Each step width is
  // split into its rounded value and rounding error so the sum telescopes
  // exactly.
  std::vector<double> terms;
  double prev = 0.0;
  for (double v : levels) {
    if (v <= 0.0) continue;
    if (!(fx > prev)) break;
    const double d = v - prev;
    const double bb = d - v;
    const double err = (v - (d - bb)) + (-prev - bb);
    terms.push_back(d);
    terms.push_back(err);
    prev = v;
  }
  return exact_sum(terms);
}

double cavalieri_power_integral(const ScalarField& f, double p) {
  if (p <= 0.0) throw std::domain_error("cavalieri_power_integral needs p > 0");
  std::vector<double> sorted = f.values;
  for (double& v : sorted) v = std::abs(v);
  std::sort(sorted.begin(), sorted.end());
  const double cv = f.grid.cell_volume();
  std::vector<double> terms;
  double prev = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double v = sorted[i];
    // mu(prev) counts cells strictly above prev, i.e. from i onwards.
    const double mu = static_cast<double>(sorted.size() - i) * cv;
    if (v > prev) terms.push_back(mu * (std::pow(v, p) - std::pow(prev, p)));
    prev = v;
    while (i < sorted.size() && sorted[i] == v) ++i;
  }
  return exact_sum(terms);
}

}  // namespace symmcal
