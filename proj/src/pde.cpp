#include "symmcal/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symmcal/rearrange.hpp"
#include "symmcal/simd.hpp"

namespace symmcal {

void apply_dirichlet_laplacian(const RegionMask& omega, const std::vector<double>& x,
                               std::vector<double>& y) {
  const Grid& g = omega.grid;
  const auto& K = simd::kernels();
  const std::size_t n = g.size();
  y.assign(n, 0.0);
  double diag = 0.0;
  for (double h : g.spacing()) diag += 2.0 / (h * h);
  K.axpy(y.data(), diag, x.data(), n);
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const std::size_t len = g.shape()[ua];
    if (len < 2) continue;
    const double w = -1.0 / (g.spacing()[ua] * g.spacing()[ua]);
    const std::size_t st = g.stride(a);
    const std::size_t outer = n / (len * st);
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * len * st;
      if (st == 1) {
        K.axpy(y.data() + base, w, x.data() + base + 1, len - 1);
        K.axpy(y.data() + base + 1, w, x.data() + base, len - 1);
      } else {
        const std::size_t span = (len - 1) * st;
        K.axpy(y.data() + base, w, x.data() + base + st, span);
        K.axpy(y.data() + base + st, w, x.data() + base, span);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!omega.members[i]) y[i] = 0.0;
}

namespace {

struct CgOutcome {
  double rel_residual;
  int iterations;
  bool converged;
};

// Solves A x = b on omega starting from x; b and x vanish off omega.
CgOutcome conjugate_gradient(const RegionMask& omega, const std::vector<double>& b,
                             std::vector<double>& x, double rel_tol, long max_iter) {
  const auto& K = simd::kernels();
  const std::size_t n = b.size();
  const double bnorm = std::sqrt(K.sum_sq(b.data(), n));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0.0, 0, true};
  }
  std::vector<double> r(n), p(n), ap(n);
  apply_dirichlet_laplacian(omega, x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  p = r;
  double rr = K.sum_sq(r.data(), n);
  const double target = rel_tol * bnorm;
  int it = 0;
  while (std::sqrt(rr) > target) {
    if (it >= max_iter) return {std::sqrt(rr) / bnorm, it, false};
    apply_dirichlet_laplacian(omega, p, ap);
    const double pap = K.dot(p.data(), ap.data(), n);
    if (!(pap > 0.0)) return {std::sqrt(rr) / bnorm, it, false};
    const double alpha = rr / pap;
    K.axpy(x.data(), alpha, p.data(), n);
    K.axpy(r.data(), -alpha, ap.data(), n);
    const double rr_new = K.sum_sq(r.data(), n);
    K.xpay(p.data(), rr_new / rr, r.data(), n);
    rr = rr_new;
    ++it;
  }
  return {std::sqrt(rr) / bnorm, it, true};
}

}  // namespace

PoissonSolution solve_poisson(const ScalarField& f, const RegionMask& omega, double rel_tol) {
  require_same_grid(f.grid, omega.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (!omega.members[i] && f.values[i] != 0.0)
      throw std::invalid_argument("solve_poisson: source is not supported in the domain");
  std::vector<double> x(f.values.size(), 0.0);
  const long cells = static_cast<long>(std::max<std::size_t>(omega.count(), 1));
  const CgOutcome out = conjugate_gradient(omega, f.values, x, rel_tol, 50 * cells);
  if (!out.converged)
    throw SolverError("solve_poisson: conjugate gradients did not converge", out.rel_residual,
                      out.iterations);
  return {ScalarField(f.grid, std::move(x)), out.rel_residual, out.iterations};
}

bool is_connected(const RegionMask& omega) {
  const Grid& g = omega.grid;
  const std::size_t total = omega.count();
  if (total == 0) return false;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<std::size_t> stack;
  const auto start = static_cast<std::size_t>(
      std::find(omega.members.begin(), omega.members.end(), std::uint8_t{1}) - omega.members.begin());
  stack.push_back(start);
  seen[start] = 1;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    ++reached;
    for (int a = 0; a < g.dim(); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const std::size_t st = g.stride(a);
      const std::size_t coord = (c / st) % g.shape()[ua];
      if (coord > 0 && omega.members[c - st] && !seen[c - st]) {
        seen[c - st] = 1;
        stack.push_back(c - st);
      }
      if (coord + 1 < g.shape()[ua] && omega.members[c + st] && !seen[c + st]) {
        seen[c + st] = 1;
        stack.push_back(c + st);
      }
    }
  }
  return reached == total;
}

EigenResult smallest_dirichlet_eigenvalue(const RegionMask& omega) {
  if (omega.empty()) throw std::invalid_argument("eigenvalue domain is empty");
  if (!is_connected(omega)) throw DisconnectedDomain();
  const auto& K = simd::kernels();
  const Grid& g = omega.grid;
  const std::size_t n = g.size();
  const double cv = g.cell_volume();
  std::vector<double> x(n), y(n, 0.0), ax(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = omega.members[i] ? 1.0 : 0.0;
  auto normalise = [&](std::vector<double>& v) {
    const double s = 1.0 / std::sqrt(K.sum_sq(v.data(), n) * cv);
    for (double& e : v) e *= s;
  };
  normalise(x);
  apply_dirichlet_laplacian(omega, x, ax);
  double lambda = K.dot(x.data(), ax.data(), n) / K.dot(x.data(), x.data(), n);
  const long max_inner = 50 * static_cast<long>(omega.count());
  constexpr int kMaxOuter = 1000;
  for (int it = 1; it <= kMaxOuter; ++it) {
    // warm start: y ~ x / lambda
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / lambda;
    const CgOutcome cg = conjugate_gradient(omega, x, y, 1e-11, max_inner);
    if (!cg.converged)
      throw SolverError("eigenvalue inner solve did not converge", cg.rel_residual, it);
    x = y;
    normalise(x);
    apply_dirichlet_laplacian(omega, x, ax);
    const double next = K.dot(x.data(), ax.data(), n) / K.dot(x.data(), x.data(), n);
    const bool done = std::abs(next - lambda) <= 1e-10 * next;
    lambda = next;
    if (!done) continue;
    // sign fix: principal eigenfunction is positive on a connected domain
    if (K.sum(x.data(), n) < 0.0) {
      for (double& v : x) v = -v;
      for (double& v : ax) v = -v;
    }
    std::vector<double> res = ax;
    K.axpy(res.data(), -lambda, x.data(), n);
    const double residual = std::sqrt(K.sum_sq(res.data(), n) * cv) / lambda;
    for (double& v : x) v = std::max(v, 0.0);
    normalise(x);
    return {lambda, ScalarField(g, std::move(x)), residual, it};
  }
  throw SolverError("inverse iteration did not converge", 0.0, kMaxOuter);
}

namespace {

// u(R) for u'' + (n-1)/r u' + lambda u = 0, u(0) = 1, u'(0) = 0.
double shoot(int n, double lambda, double radius, int steps) {
  const double nn = static_cast<double>(n);
  const double r0 = radius * 1e-6;
  // series start: u = 1 - lambda r^2 / (2n) + lambda^2 r^4 / (8 n (n+2))
  double u = 1.0 - lambda * r0 * r0 / (2.0 * nn) +
             lambda * lambda * r0 * r0 * r0 * r0 / (8.0 * nn * (nn + 2.0));
  double du = -lambda * r0 / nn + lambda * lambda * r0 * r0 * r0 / (2.0 * nn * (nn + 2.0));
  const double h = (radius - r0) / steps;
  auto acc = [&](double r, double uu, double dd) { return -(nn - 1.0) / r * dd - lambda * uu; };
  double r = r0;
  for (int s = 0; s < steps; ++s) {
    const double k1u = du, k1d = acc(r, u, du);
    const double k2u = du + 0.5 * h * k1d, k2d = acc(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d);
    const double k3u = du + 0.5 * h * k2d, k3d = acc(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d);
    const double k4u = du + h * k3d, k4d = acc(r + h, u + h * k3u, du + h * k3d);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    r += h;
  }
  return u;
}

}  // namespace

double radial_dirichlet_eigenvalue(int n, double radius) {
  if (n < 1) throw std::invalid_argument("radial_dirichlet_eigenvalue needs n >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("radial_dirichlet_eigenvalue needs radius > 0");
  constexpr int kSteps = 20000;
  // work on the unit ball and rescale: lambda(R) = lambda(1) / R^2
  double lo = 0.5;
  double hi = lo;
  while (shoot(n, hi, 1.0, kSteps) > 0.0) {
    lo = hi;
    hi *= 1.2;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (shoot(n, mid, 1.0, kSteps) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / (radius * radius);
}

RegionMask comparison_domain(const Grid& grid, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("comparison_domain fraction must be in (0, 1]");
  RegionMask m(grid);
  const int pad = kMaxDim - grid.dim();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Index3 i = grid.unravel3(k);
    bool in = true;
    for (int a = 0; a < grid.dim(); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const double half = 0.5 * fraction * static_cast<double>(grid.shape()[ua]) * grid.spacing()[ua];
      in = in && std::abs(grid.relative_coordinate(a, i[static_cast<std::size_t>(pad + a)])) < half;
    }
    m.members[k] = in ? 1 : 0;
  }
  return m;
}

namespace {

struct TalentiPair {
  ScalarField u;
  ScalarField v;
};

TalentiPair talenti_pair(const ScalarField& f, const RegionMask& omega) {
  for (double x : f.values)
    if (x < 0.0) throw std::domain_error("comparison checks need a non-negative source");
  const RegionMask omega_star = rearrange_mask(omega);
  ScalarField u = solve_poisson(f, omega).u;
  ScalarField v = solve_poisson(rearrange_field(f), omega_star).u;
  return {std::move(u), std::move(v)};
}

ScalarField clamp_nonneg(ScalarField f) {
  for (double& x : f.values) x = std::max(x, 0.0);
  return f;
}

}  // namespace

CheckResult check_talenti(const ScalarField& f, const RegionMask& omega) {
  const TalentiPair p = talenti_pair(f, omega);
  const ScalarField us = rearrange_field(clamp_nonneg(p.u));
  const double vmax = p.v.max();
  double worst = std::numeric_limits<double>::infinity();
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < us.values.size(); ++i) {
    const double margin = p.v.values[i] - us.values[i];
    if (margin < worst) {
      worst = margin;
      lhs = us.values[i];
      rhs = p.v.values[i];
    }
  }
  return make_check("talenti", lhs, rhs, worst, 0.02 * vmax);
}

CheckResult check_talenti(const ScalarField& f) { return check_talenti(f, comparison_domain(f.grid)); }

CheckResult check_gradient_domination(const ScalarField& f, const RegionMask& omega) {
  const TalentiPair p = talenti_pair(f, omega);
  const double lhs = lp_norm(gradient_magnitude(p.u), 2.0);
  const double rhs = lp_norm(gradient_magnitude(p.v), 2.0);
  return make_check("gradient_domination", lhs, rhs, rhs - lhs, 0.01 * check_scale(lhs, rhs));
}

CheckResult check_gradient_domination(const ScalarField& f) {
  return check_gradient_domination(f, comparison_domain(f.grid));
}

double dirichlet_energy(const ScalarField& u) {
  const Grid& g = u.grid;
  const Index3 s = g.shape3();
  const int pad = kMaxDim - g.dim();
  double total = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto ax = static_cast<std::size_t>(pad + a);
    const std::size_t stride = g.stride(a);
    const double inv_h2 = 1.0 / (g.spacing()[static_cast<std::size_t>(a)] * g.spacing()[static_cast<std::size_t>(a)]);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t pos = g.unravel3(i)[ax];
      const double here = u.values[i];
      const double next = pos + 1 < s[ax] ? u.values[i + stride] : 0.0;
      acc += (next - here) * (next - here);
      if (pos == 0) acc += here * here;
    }
    total += acc * inv_h2;
  }
  return total * g.cell_volume();
}

CheckResult check_energy_identity(const ScalarField& f, const RegionMask& omega) {
  const ScalarField u = solve_poisson(f, omega).u;
  const double lhs = dirichlet_energy(u);
  const double rhs = inner_product(u, f);
  return make_check("energy_identity", lhs, rhs, -std::abs(lhs - rhs),
                    1e-6 * std::max(std::abs(lhs), std::abs(rhs)));
}

ScalarField heat_smooth(const ScalarField& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_smooth needs t > 0");
  const Grid& g = f.grid;
  const double radius = 5.0 * std::sqrt(2.0 * t);
  for (int a = 0; a < g.dim(); ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const double reach = radius / g.spacing()[ua];
    if (reach > static_cast<double>(g.shape()[ua] / 2))
      throw std::invalid_argument("heat_smooth: kernel wider than the grid");
  }
  ScalarField k(g);
  const int pad = kMaxDim - g.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    const Offset3 o = detail::kernel_offset(g, i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double x = static_cast<double>(o[static_cast<std::size_t>(pad + a)]) *
                       g.spacing()[static_cast<std::size_t>(a)];
      r2 += x * x;
    }
    if (r2 > radius * radius) continue;
    k.values[i] = std::exp(-r2 / (4.0 * t));
    total += k.values[i];
  }
  const double s = 1.0 / (total * g.cell_volume());
  for (double& v : k.values) v *= s;
  return convolve(f, k);
}

double unit_cube_inverse_distance_average() {
  return 3.0 * std::log(2.0 + std::numbers::sqrt3) - 0.5 * std::numbers::pi;
}

ScalarField newtonian_potential(const ScalarField& f) {
  const Grid& g = f.grid;
  if (g.dim() != 3) throw std::invalid_argument("potential checks are restricted to n = 3");
  if (!g.isotropic()) throw std::invalid_argument("potential checks need isotropic spacing");
  const Index3 s = g.shape3();
  const double h = g.spacing()[0];
  // kernel table over all offsets, extents 2s-1
  const Index3 ks{2 * s[0] - 1, 2 * s[1] - 1, 2 * s[2] - 1};
  std::vector<double> kern(ks[0] * ks[1] * ks[2]);
  for (std::size_t i = 0; i < ks[0]; ++i)
    for (std::size_t j = 0; j < ks[1]; ++j)
      for (std::size_t l = 0; l < ks[2]; ++l) {
        const double di = static_cast<double>(static_cast<long>(i) - static_cast<long>(s[0]) + 1);
        const double dj = static_cast<double>(static_cast<long>(j) - static_cast<long>(s[1]) + 1);
        const double dl = static_cast<double>(static_cast<long>(l) - static_cast<long>(s[2]) + 1);
        const double r = std::sqrt(di * di + dj * dj + dl * dl);
        kern[(i * ks[1] + j) * ks[2] + l] = r == 0.0 ? unit_cube_inverse_distance_average() / h : 1.0 / (r * h);
      }
  const auto& K = simd::kernels();
  ScalarField u(g);
  const double cv = g.cell_volume();
  for (std::size_t y = 0; y < f.values.size(); ++y) {
    const double w = f.values[y];
    if (w == 0.0) continue;
    const Index3 c = g.unravel3(y);
    for (std::size_t i = 0; i < s[0]; ++i)
      for (std::size_t j = 0; j < s[1]; ++j) {
        // offset x - y + (s-1) per axis
        const std::size_t ki = i + s[0] - 1 - c[0];
        const std::size_t kj = j + s[1] - 1 - c[1];
        const std::size_t kl = s[2] - 1 - c[2];
        K.axpy(u.values.data() + (i * s[1] + j) * s[2], w * cv,
               kern.data() + (ki * ks[1] + kj) * ks[2] + kl, s[2]);
      }
  }
  return u;
}

CheckResult check_potential_domination(const ScalarField& f) {
  for (double x : f.values)
    if (x < 0.0) throw std::domain_error("potential domination needs a non-negative source");
  const ScalarField u = newtonian_potential(f);
  const ScalarField v = newtonian_potential(rearrange_field(f));
  const auto ro = radial_order(f.grid);
  std::vector<double> us = u.values;
  std::sort(us.begin(), us.end(), std::greater<>());
  double half_extent = std::numeric_limits<double>::max();
  for (int a = 0; a < 3; ++a)
    half_extent = std::min(half_extent, 0.5 * static_cast<double>(f.grid.shape()[static_cast<std::size_t>(a)]) *
                                            f.grid.spacing()[static_cast<std::size_t>(a)]);
  const double cv = f.grid.cell_volume();
  double worst = std::numeric_limits<double>::infinity();
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  std::size_t k = 0;
  double su = 0.0;
  double sv = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const double r = half_extent * j / 10.0;
    while (k < ro->order.size() && ro->radius_sq[k] < r * r) {
      su += us[k];
      sv += v.values[ro->order[k]];
      ++k;
    }
    const double a = su * cv;
    const double b = sv * cv;
    const double t = 0.01 * check_scale(a, b);
    // keep the radius with the smallest margin to failure
    if (j == 1 || b - a + t < worst + tol) {
      worst = b - a;
      lhs = a;
      rhs = b;
      tol = t;
    }
  }
  return make_check("potential_domination", lhs, rhs, worst, tol);
}

CheckResult check_faber_krahn(const RegionMask& omega) {
  const double rhs = smallest_dirichlet_eigenvalue(omega).lambda1;
  const double lhs = smallest_dirichlet_eigenvalue(rearrange_mask(omega)).lambda1;
  return make_check("faber_krahn", lhs, rhs, rhs - lhs, 0.01 * lhs);
}

}  // namespace symmcal
