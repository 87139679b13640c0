#include "symmcal/distance.hpp"

#include <limits>

namespace symmcal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d(q) = min_p ((q - p) h)^2 + f(p), skipping p with f(p) = inf.
void transform_line(const double* f, double* d, std::size_t n, double h, std::vector<std::size_t>& v,
                    std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  const double h2 = h * h;
  auto key = [&](std::size_t p) { return f[p] + h2 * static_cast<double>(p) * static_cast<double>(p); };
  std::size_t k = 0;
  bool any = false;
  for (std::size_t q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (!any) {
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      any = true;
      continue;
    }
    double s = 0.0;
    while (true) {
      const std::size_t p = v[k];
      s = (key(q) - key(p)) / (2.0 * h2 * static_cast<double>(q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (!any) {
    for (std::size_t q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[k + 1] < static_cast<double>(q)) ++k;
    const double dq = (static_cast<double>(q) - static_cast<double>(v[k])) * h;
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_to_members(const RegionMask& mask) {
  const Grid& g = mask.grid;
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = mask.members[i] ? 0.0 : kInf;
  std::vector<double> in, out;
  std::vector<std::size_t> v;
  std::vector<double> z;
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const std::size_t n = g.shape()[ua];
    const std::size_t st = g.stride(a);
    const std::size_t outer = g.size() / (n * st);
    in.resize(n);
    out.resize(n);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t j = 0; j < st; ++j) {
        const std::size_t base = o * n * st + j;
        for (std::size_t q = 0; q < n; ++q) in[q] = d[base + q * st];
        transform_line(in.data(), out.data(), n, g.spacing()[ua], v, z);
        for (std::size_t q = 0; q < n; ++q) d[base + q * st] = out[q];
      }
    }
  }
  return d;
}

}  // namespace symmcal
