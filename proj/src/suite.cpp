#include "symmcal/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "symmcal/generators.hpp"
#include "symmcal/inequalities.hpp"
#include "symmcal/io.hpp"
#include "symmcal/manifold.hpp"
#include "symmcal/pde.hpp"
#include "symmcal/perimeter.hpp"
#include "symmcal/random.hpp"
#include "symmcal/rearrange.hpp"

namespace symmcal {

using nlohmann::json;
using Task = std::function<std::vector<CheckResult>()>;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"rearrangement", "geometry", "pde", "manifold", "all"};
  return names;
}

void SuiteConfig::validate() const {
  const auto& n = suite_names();
  if (std::find(n.begin(), n.end(), suite) == n.end())
    throw std::invalid_argument("unknown suite: " + suite);
  if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  if (size < 32) throw std::invalid_argument("grid size must be >= 32");
  if (!(tol_scale > 0.0) || !std::isfinite(tol_scale)) throw std::invalid_argument("tol-scale must be positive");
  if (format != "json" && format != "csv") throw std::invalid_argument("format must be json or csv");
}

void VerificationReport::tally() {
  passed = failed = unjudged = 0;
  for (const auto& c : checks) {
    if (!c.judged) ++unjudged;
    else if (c.pass) ++passed;
    else ++failed;
  }
}

void apply_tol_scale(std::vector<CheckResult>& checks, double scale) {
  for (auto& c : checks) {
    if (!c.judged) continue;
    c.tol *= scale;
    c.pass = std::isfinite(c.slack) && c.slack >= -c.tol;
  }
}

int threads_from_env() {
  const char* s = std::getenv("SYMMCAL_THREADS");
  if (s == nullptr) return 1;
  const int n = std::atoi(s);
  return n >= 1 ? n : 1;
}

std::vector<CheckResult> run_tasks(const std::vector<Task>& tasks, int threads) {
  std::vector<std::vector<CheckResult>> out(tasks.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(tasks.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            out[i] = tasks[i]();
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<CheckResult> all;
  for (auto& v : out)
    for (auto& c : v) all.push_back(std::move(c));
  return all;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string tagged(const std::string& name, int trial) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%04d", trial);
  return name + buf;
}

CheckResult with_seed(CheckResult c, int trial, std::uint64_t seed) {
  c.name = tagged(c.name, trial);
  c.seed = seed;
  return c;
}

// Equality within an absolute band: slack = band - |lhs - rhs| is reported
// against tol 0 so the margin stays visible.
CheckResult near(std::string name, double lhs, double rhs, double band) {
  return make_check(std::move(name), lhs, rhs, -std::abs(lhs - rhs), band);
}

// Keep the entry closest to failing.
void keep_worst(CheckResult& acc, const CheckResult& c, bool first) {
  if (first || c.slack + c.tol < acc.slack + acc.tol) acc = c;
}

// ---------------------------------------------------------------- rearrangement

ScalarField quantised(ScalarField f, double step) {
  for (double& v : f.values) v = std::floor(v / step) * step;
  return f;
}

std::vector<CheckResult> rearrangement_trial(const SuiteConfig& cfg, int t) {
  const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
  Rng rng(seed);
  const Grid grid = Grid::cube(cfg.dim, cfg.size, 2.0);
  ScalarField f = random_smooth_field(grid, rng.next(), 1 + t % 4);
  ScalarField g = random_smooth_field(grid, rng.next(), 1 + (t + 1) % 4);
  // every other trial uses coarse levels so value ties are exercised
  if (t % 2 == 1) {
    f = quantised(std::move(f), 0.125);
    g = quantised(std::move(g), 0.125);
  }
  std::vector<CheckResult> out;
  auto add = [&](CheckResult c) { out.push_back(with_seed(std::move(c), t, seed)); };

  const ScalarField fs = rearrange_field(f);
  {
    const std::vector<double> levels = distinct_values(f);
    const auto a = distribution_function(f, levels);
    const auto b = distribution_function(fs, levels);
    double worst = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) worst = std::max(worst, std::abs(a.measures[i] - b.measures[i]));
    add(make_check("equimeasurability", a.measures.empty() ? 0.0 : a.measures[0],
                   b.measures.empty() ? 0.0 : b.measures[0], -worst, 0.0));
  }
  {
    std::vector<double> x = f.values, y = fs.values;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    add(make_check("permutation", static_cast<double>(x.size()), static_cast<double>(y.size()),
                   x == y ? 0.0 : -1.0, 0.0));
  }
  {
    const ScalarField fss = rearrange_field(fs);
    add(make_check("idempotence", integral(fs), integral(fss), fss.values == fs.values ? 0.0 : -1.0, 0.0));
    const auto ro = radial_order(grid);
    double rise = 0.0;
    for (std::size_t p = 1; p < ro->order.size(); ++p)
      rise = std::max(rise, fs.values[ro->order[p]] - fs.values[ro->order[p - 1]]);
    add(make_check("radially_non_increasing", 0.0, rise, -rise, 0.0));
  }
  for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) add(check_lp_preservation(f, p));
  add(rearranged_char_equals_char_of_rearranged(super_level_set(g, 0.3 * g.max())));
  {
    CheckResult worst;
    const double top = f.max();
    for (int i = 0; i < 20; ++i) keep_worst(worst, level_set_commutes(f, rng.uniform(0.0, top)), i == 0);
    add(worst);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const std::size_t cell = rng.below(f.size());
      worst = std::max(worst, std::abs(layer_cake_eval(f, cell) - f.values[cell]));
    }
    add(make_check("layer_cake", 0.0, worst, -worst, 0.0));
  }
  {
    const double lhs = cavalieri_power_integral(f, 2.0);
    const double n2 = lp_norm(f, 2.0);
    add(near("cavalieri_p2", lhs, n2 * n2, 1e-12 * check_scale(lhs, n2 * n2)));
  }
  {
    ScalarField h = f;  // f <= f + g pointwise
    for (std::size_t i = 0; i < h.size(); ++i) h.values[i] += g.values[i];
    const ScalarField hs = rearrange_field(h);
    double worst = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) worst = std::max(worst, fs.values[i] - hs.values[i]);
    add(make_check("order_preservation", 0.0, worst, -worst, 0.0));
  }
  add(check_hardy_littlewood(f, g));
  {
    ScalarField sq = f;
    for (double& v : sq.values) v *= v;
    CheckResult c = check_hardy_littlewood(f, sq);
    c.name = "hardy_littlewood_equality";
    c.slack = -std::abs(c.slack);
    c.pass = c.slack >= -c.tol;
    add(c);
  }
  {
    std::vector<double> sorted = g.values;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
    add(check_complement_lemma(f, g, sorted[sorted.size() / 2]));
  }
  add(check_lp_contraction(f, g, 1.0));
  add(check_lp_contraction(f, g, 2.0));
  add(check_nonexpansivity(f, g, ConvexFunction::abs_power(2.0)));
  add(check_nonexpansivity(f, g, ConvexFunction::positive_square()));
  add(check_nonexpansivity(f, g, ConvexFunction::smooth_hinge()));
  {
    // odd grid so the kernel centre is the rearrangement centre
    const std::size_t s = cfg.size | 1;
    const Grid odd = Grid::cube(cfg.dim, s, 2.0 * static_cast<double>(s) / static_cast<double>(cfg.size));
    const ScalarField a = random_smooth_field(odd, rng.next(), 1 + t % 3);
    const ScalarField b = random_smooth_field(odd, rng.next(), 1 + (t + 2) % 3);
    add(check_riesz(a, b, gaussian_kernel(odd, rng.uniform(0.05, 0.2))));
  }
  if (cfg.dim >= 2) add(check_sobolev_quotient(f, 1.0));
  return out;
}

// ---------------------------------------------------------------- geometry

constexpr std::size_t kMinGeometrySize = 48;

RegionMask gaussian_free_disk(const Grid& g) { return disk_mask(g, 0.0, 0.0, 1.0); }

std::vector<CheckResult> geometry_trial(const SuiteConfig& cfg, int t) {
  const std::uint64_t seed = derive_seed(cfg.seed ^ 0x6e6f6d65ULL, static_cast<std::uint64_t>(t));
  Rng rng(seed);
  // below 48 cells the 4h Minkowski ring around these shapes leaves the box
  const Grid grid = Grid::cube(2, std::max<std::size_t>(cfg.size, kMinGeometrySize), 2.2);
  std::vector<CheckResult> out;
  auto add = [&](CheckResult c) { out.push_back(with_seed(std::move(c), t, seed)); };
  const double h = grid.spacing()[0];
  const double rmin = std::max(0.2, 6.0 * h);
  {
    const RegionMask a = rasterize(grid, random_convex_polygon(rng, rng.uniform(-0.2, 0.2),
                                                               rng.uniform(-0.2, 0.2), rmin, 0.6));
    add(check_sharp_isoperimetric(a));
    add(check_isoperimetric_mask(a));
  }
  {
    const RegionMask a = rasterize(grid, random_convex_polygon(rng, rng.uniform(-0.1, 0.1),
                                                               rng.uniform(-0.1, 0.1), rmin, 0.4));
    const RegionMask b = rasterize(grid, random_convex_polygon(rng, rng.uniform(-0.1, 0.1),
                                                               rng.uniform(-0.1, 0.1), rmin, 0.4));
    add(check_brunn_minkowski(a, b));
  }
  {
    Polygon p = random_star_polygon(rng);
    while (!polygon_is_simple(p)) p = random_star_polygon(rng);
    add(check_planar_polygon(p));
  }
  {
    const ScalarField f = random_smooth_field(grid, rng.next(), 1 + t % 4);
    add(check_polya_szego(f, 1.0));
    add(check_polya_szego(f, 2.0));
  }
  return out;
}

std::vector<CheckResult> geometry_disk_oracles() {
  std::vector<CheckResult> out;
  const Grid grid = Grid::cube(2, 512, 2.2);
  const double h = grid.spacing()[0];
  const RegionMask disk = gaussian_free_disk(grid);
  const double per = 2.0 * kPi;
  const double mk = perimeter_minkowski(disk, 4.0 * h).value;
  out.push_back(near("disk_perimeter_minkowski", mk, per, 0.03 * per));
  const double cv = perimeter_convolution(disk, 6.0 * h).value;
  out.push_back(near("disk_perimeter_convolution", cv, per, 0.05 * per));
  const double sg = perimeter_smoothed_gradient(disk, 3.0 * h).value;
  out.push_back(near("disk_perimeter_smoothed_gradient", sg, per, 0.05 * per));
  const double ratio = perimeter_face_count(disk).value / per;
  out.push_back(make_check("disk_face_count_ratio", ratio, 1.275, std::min(ratio - 1.2, 1.35 - ratio), 0.0));
  {
    CheckResult c = check_sharp_isoperimetric(disk);
    const double excess = (c.lhs - c.rhs) / c.rhs;
    out.push_back(make_check("disk_sharp_isoperimetric_excess", c.lhs, c.rhs, 0.01 - excess, 0.0));
    out.push_back(c);
  }
  {
    const RegionMask sq = rectangle_mask(grid, 0.0, 0.0, 1.0, 1.0);
    out.push_back(near("square_perimeter_minkowski", perimeter_minkowski(sq, 4.0 * h).value, 4.0, 0.05 * 4.0));
  }
  {
    // two disjoint disks against one ball of the same volume
    const Grid g2 = Grid::cube(2, 256, 2.2);
    RegionMask two = disk_mask(g2, -0.45, 0.0, 0.3);
    const RegionMask other = disk_mask(g2, 0.45, 0.0, 0.3);
    for (std::size_t i = 0; i < two.members.size(); ++i) two.members[i] |= other.members[i];
    CheckResult c = check_isoperimetric_mask(two);
    c.name = "isoperimetric_two_disks";
    c.tol = 0.0;
    c.pass = c.slack > 0.0;
    out.push_back(c);
  }
  return out;
}

ScalarField radial_gaussian(std::size_t n) {
  const Grid g = Grid::cube(2, n, 7.0);
  ScalarField f(g);
  const auto c = cell_centers(g);
  for (std::size_t i = 0; i < c.size(); ++i) f.values[i] = std::exp(-(c[i][0] * c[i][0] + c[i][1] * c[i][1]));
  return f;
}

std::vector<CheckResult> geometry_coarea_oracles() {
  std::vector<CheckResult> out;
  CheckResult fine = coarea_check(radial_gaussian(256), 200);
  CheckResult coarse = coarea_check(radial_gaussian(64), 200);
  const double analytic = std::pow(kPi, 1.5);  // integral of 2 r e^{-r^2} 2 pi r dr
  out.push_back(near("coarea_gaussian_lhs_analytic", fine.lhs, analytic, 0.01 * analytic));
  const double gf = coarea_gap(fine);
  const double gc = coarea_gap(coarse);
  fine.name = "coarea_gaussian_256";
  coarse.name = "coarea_gaussian_64";
  coarse = make_unjudged(coarse.name, coarse.lhs, coarse.rhs, coarse.slack);
  out.push_back(fine);
  out.push_back(coarse);
  out.push_back(make_check("coarea_refinement", gf, gc, gc - gf > 0.0 ? gc - gf : -1.0, 0.0));
  return out;
}

std::vector<CheckResult> geometry_exact_oracles() {
  std::vector<CheckResult> out;
  {
    const Polygon p = regular_polygon(256, 1.0);
    const double a = polygon_signed_area(p);
    const double l = polygon_length(p);
    const double ratio = l * l / (4.0 * kPi * a);
    out.push_back(make_check("regular_256gon_ratio", ratio, 1.0, std::min(ratio - 1.0, 1.001 - ratio), 0.0));
    // closed forms: L = 2n sin(pi/n), A = n/2 sin(2 pi/n)
    const double lc = 512.0 * std::sin(kPi / 256.0);
    const double ac = 128.0 * std::sin(2.0 * kPi / 256.0);
    out.push_back(near("regular_256gon_closed_form", l * l / (4.0 * kPi * a), lc * lc / (4.0 * kPi * ac), 1e-12));
  }
  {
    const Grid g = Grid::cube(2, 129, 2.0);
    const double h = g.spacing()[0];
    const RegionMask a = rectangle_mask(g, 0.0, 0.0, 20.5 * h, 20.5 * h);
    const RegionMask b = rectangle_mask(g, 0.0, 0.0, 10.5 * h, 10.5 * h);
    CheckResult c = check_brunn_minkowski(a, b);
    c.name = "brunn_minkowski_homothetic_squares";
    c.slack = -std::abs(c.slack);
    c.pass = c.slack >= -c.tol;
    out.push_back(c);
  }
  {
    Polygon sq{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    out.push_back(check_planar_polygon(sq));
    out.back().name = "planar_unit_square";
  }
  return out;
}

// ---------------------------------------------------------------- pde

std::vector<CheckResult> pde_manufactured() {
  std::vector<CheckResult> out;
  // unit square [0,1]^2: outer cell centres sit on the boundary
  const Grid g({129, 129}, {1.0 / 128, 1.0 / 128}, {0.5, 0.5});
  RegionMask omega(g);
  ScalarField f(g), exact(g);
  const auto c = cell_centers(g);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double x = c[i][0], y = c[i][1];
    const bool in = x > 1e-12 && x < 1.0 - 1e-12 && y > 1e-12 && y < 1.0 - 1e-12;
    omega.members[i] = in;
    if (!in) continue;
    exact.values[i] = std::sin(kPi * x) * std::sin(kPi * y);
    f.values[i] = 2.0 * kPi * kPi * exact.values[i];
  }
  const PoissonSolution s = solve_poisson(f, omega);
  double err = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) err = std::max(err, std::abs(s.u.values[i] - exact.values[i]));
  out.push_back(make_check("poisson_manufactured_max_error", err, 0.01, 0.01 - err, 0.0));
  out.push_back(make_check("poisson_residual", s.residual_norm, 1e-10, 1e-10 - s.residual_norm, 0.0));
  {
    CheckResult e = check_energy_identity(f, omega);
    e.name = "energy_identity_manufactured";
    out.push_back(e);
    // integral u f = 2 pi^2 * 1/4 for the exact pair
    out.push_back(near("energy_manufactured_analytic", inner_product(s.u, f), 0.5 * kPi * kPi, 0.01 * 0.5 * kPi * kPi));
  }
  return out;
}

std::vector<CheckResult> pde_eigen_oracles() {
  std::vector<CheckResult> out;
  // h = 1/256 with room for the equal-area disk (radius 0.564)
  const Grid g({333, 333}, {1.0 / 256, 1.0 / 256});
  const RegionMask square = rectangle_mask(g, 0.0, 0.0, 1.0 - 1e-9, 1.0 - 1e-9);
  const double sq = smallest_dirichlet_eigenvalue(square).lambda1;
  const double target = 2.0 * kPi * kPi;
  out.push_back(near("eigen_unit_square", sq, target, 0.005 * target));
  const double disk = smallest_dirichlet_eigenvalue(rearrange_mask(square)).lambda1;
  const double bessel = radial_dirichlet_eigenvalue(2, 1.0 / std::sqrt(kPi));
  out.push_back(near("eigen_equal_area_disk_bessel", disk, bessel, 0.02 * bessel));
  out.push_back(make_check("faber_krahn_square", disk, sq, sq - disk, 0.01 * disk));
  {
    const Grid r({161, 161}, {1.0 / 64, 1.0 / 64});
    const RegionMask rect = rectangle_mask(r, 0.0, 0.0, 2.0 - 1e-9, 1.0 - 1e-9);
    const double lam = smallest_dirichlet_eigenvalue(rect).lambda1;
    const double exact = kPi * kPi * 1.25;
    out.push_back(near("eigen_rectangle_1x2", lam, exact, 0.005 * exact));
    // nested rectangles
    const RegionMask inner = rectangle_mask(r, 0.0, 0.0, 1.5 - 1e-9, 1.0 - 1e-9);
    const double li = smallest_dirichlet_eigenvalue(inner).lambda1;
    out.push_back(make_check("eigen_domain_monotonicity", lam, li, li - lam, 1e-8));
  }
  {
    const Grid l = Grid::cube(2, 129, 2.0);
    RegionMask shape = rectangle_mask(l, 0.0, 0.0, 1.0, 1.0);
    const RegionMask cut = rectangle_mask(l, 0.25, 0.25, 0.5, 0.5);
    for (std::size_t i = 0; i < shape.members.size(); ++i) shape.members[i] &= !cut.members[i];
    CheckResult c = check_faber_krahn(shape);
    c.name = "faber_krahn_l_shape";
    out.push_back(c);
  }
  return out;
}

// Smooth bumps (1 - |x - c|^2 / w^2)^3 supported in [-0.5, 0.5]^2.
ScalarField smooth_compact_field(const Grid& g, Rng& rng) {
  ScalarField f(g);
  const auto c = cell_centers(g);
  const int k = 1 + static_cast<int>(rng.below(3));
  for (int b = 0; b < k; ++b) {
    const double cx = rng.uniform(-0.15, 0.15), cy = rng.uniform(-0.15, 0.15);
    const double w = rng.uniform(0.25, 0.35), a = rng.uniform(0.5, 1.5);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double q = ((c[i][0] - cx) * (c[i][0] - cx) + (c[i][1] - cy) * (c[i][1] - cy)) / (w * w);
      if (q < 1.0) f.values[i] += a * (1.0 - q) * (1.0 - q) * (1.0 - q);
    }
  }
  return f;
}

std::vector<CheckResult> pde_trial(const SuiteConfig& cfg, int t) {
  const std::uint64_t seed = derive_seed(cfg.seed ^ 0x706465ULL, static_cast<std::uint64_t>(t));
  Rng rng(seed);
  std::vector<CheckResult> out;
  auto add = [&](CheckResult c) { out.push_back(with_seed(std::move(c), t, seed)); };
  const Grid grid = Grid::cube(2, cfg.size, 2.0);
  const RegionMask omega = comparison_domain(grid);
  const ScalarField f = random_compact_source(grid, omega, rng, 1 + t % 2);
  add(check_talenti(f, omega));
  add(check_gradient_domination(f, omega));
  add(check_energy_identity(f, omega));
  {
    const Grid hg = Grid::cube(2, 129, 129.0 / 64.0);  // odd: kernel and rearrangement share a centre
    const double h = hg.spacing()[0];
    const ScalarField s = smooth_compact_field(hg, rng);
    const double t_small = 2.0 * h * h;  // sigma = 2h
    const ScalarField hs = heat_smooth(s, t_small);
    add(near("heat_mass", integral(hs), integral(s), 1e-10 * check_scale(integral(hs), integral(s))));
    const double rel = lp_norm(hs - s, 1.0) / lp_norm(s, 1.0);
    add(make_check("heat_approximate_identity", rel, 0.1, 0.1 - rel, 0.0));
    const ScalarField r = random_smooth_field(hg, rng.next(), 2 + t % 3);
    const ScalarField rs = rearrange_field(r);
    const double i_t = inner_product(heat_smooth(r, t_small), r);
    const double j_t = inner_product(heat_smooth(rs, t_small), rs);
    add(make_check("heat_riesz", i_t, j_t, j_t - i_t, 1e-10 * check_scale(i_t, j_t)));
    const ScalarField twice = heat_smooth(heat_smooth(s, t_small), t_small);
    const ScalarField once = heat_smooth(s, 2.0 * t_small);
    const double gap = lp_norm(twice - once, 1.0) / lp_norm(once, 1.0);
    add(make_check("heat_semigroup", gap, 0.01, 0.01 - gap, 0.0));
  }
  if (t < 3) {
    const Grid g3 = Grid::cube(3, 21, 2.0);
    const RegionMask inner = comparison_domain(g3, 0.8);
    add(check_potential_domination(random_compact_source(g3, inner, rng, 1 + t % 2)));
  }
  return out;
}

// ---------------------------------------------------------------- manifold

using manifold::ManifoldField;
using manifold::WeightedRadialGrid;

std::shared_ptr<const WeightedRadialGrid> polar_grid(std::size_t cells, double r1) {
  return std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::from_weight(
      [](double r) { return r; }, WeightedRadialGrid::uniform_edges(0.0, r1, cells), 2.0 * kPi));
}

double gram_det_bruteforce(const manifold::LinearMapMatrix& t) {
  // 3x3 Gram matrix and its cofactor determinant
  double g[3][3] = {};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t r = 0; r < t.rows; ++r) g[i][j] += t(r, i) * t(r, j);
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

std::vector<CheckResult> manifold_trial(const SuiteConfig& cfg, int t) {
  const std::uint64_t seed = derive_seed(cfg.seed ^ 0x6d616eULL, static_cast<std::uint64_t>(t));
  Rng rng(seed);
  std::vector<CheckResult> out;
  auto add = [&](CheckResult c) { out.push_back(with_seed(std::move(c), t, seed)); };
  const std::size_t cells = std::max<std::size_t>(cfg.size, 16);
  const std::vector<std::shared_ptr<const WeightedRadialGrid>> grids{
      std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::uniform_edges(0.0, 1.0, cells),
                                                 std::vector<double>(cells, 1.0), 1.0,
                                                 std::vector<double>{0.25, 0.25, 0.25, 0.25}),
      polar_grid(cells, 2.0),
      std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::from_weight(
          [](double r) { return r * r; }, WeightedRadialGrid::uniform_edges(0.0, 1.5, cells), 4.0 * kPi,
          {kPi, 2.0 * kPi, kPi}))};
  const char* tags[] = {"uniform", "polar", "spherical"};
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const ManifoldField f = random_manifold_field(grids[k], rng);
    const ManifoldField g = random_manifold_field(grids[k], rng);
    const std::string tag = std::string("_") + tags[k];
    auto named = [&](CheckResult c) {
      c.name += tag;
      add(std::move(c));
    };
    named(manifold::check_lp_M(f, 1.0));
    named(manifold::check_lp_M(f, 2.0));
    named(manifold::check_hardy_littlewood_M(f, g));
    named(manifold::check_lp_contraction_M(f, g, 1.0));
    const double top = *std::max_element(f.values.begin(), f.values.end());
    named(manifold::check_level_sets_M(f, rng.uniform(0.0, top)));
    named(manifold::coarea_M_check(f));
    {
      // distribution preserved within one cell measure at every stored value
      const ManifoldField fs = manifold::rearrange_field_M(f);
      double worst = 0.0;
      for (double v : f.values)
        worst = std::max(worst, std::abs(manifold::distribution_M(f, v) - manifold::distribution_M(fs, v)));
      named(make_check("distribution_M", 0.0, worst, -worst, grids[k]->max_cell_measure() * (1.0 + 1e-12)));
    }
  }
  {
    manifold::LinearMapMatrix m{5, 3, std::vector<double>(15)};
    for (double& e : m.entries) e = rng.uniform(-1.0, 1.0);
    const double j = manifold::gram_jacobian(m);
    const double brute = std::sqrt(gram_det_bruteforce(m));
    add(near("gram_jacobian_bruteforce", j, brute, 1e-10 * check_scale(j, brute)));
  }
  return out;
}

double annulus_bump(double r) {
  const double u = (r - 0.45) / 0.4;
  return std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
}

}  // namespace

CheckResult euclidean_emulation_check(std::size_t size) {
  const Grid g = Grid::cube(2, size, 2.0);
  ScalarField f(g);
  const auto c = cell_centers(g);
  for (std::size_t i = 0; i < c.size(); ++i) f.values[i] = annulus_bump(std::hypot(c[i][0], c[i][1]));
  const ScalarField fs = rearrange_field(f);

  // shells one cell wide on phi(r) = r, sigma = 2 pi
  const auto shells = static_cast<std::size_t>(std::ceil(1.0 / g.spacing()[0]));
  const auto polar = polar_grid(shells, 1.0);
  std::vector<double> profile(shells);
  for (std::size_t i = 0; i < shells; ++i) profile[i] = annulus_bump(polar->center(i));
  const ManifoldField ms = manifold::rearrange_field_M(ManifoldField::radial(polar, profile));

  // Both profiles as functions of the enclosed volume: at each level v the
  // volume intervals [|{f* > v}|, |{f* >= v}|] must lie within one shell.
  const double cv = g.cell_volume();
  double gap = 0.0;
  for (double v : distinct_values(fs)) {
    double e_gt = 0.0, e_ge = 0.0, m_gt = 0.0, m_ge = 0.0;
    for (double x : fs.values) {
      e_gt += x > v ? cv : 0.0;
      e_ge += x >= v ? cv : 0.0;
    }
    for (std::size_t k = 0; k < ms.values.size(); ++k) {
      m_gt += ms.values[k] > v ? polar->cell_measure(k) : 0.0;
      m_ge += ms.values[k] >= v ? polar->cell_measure(k) : 0.0;
    }
    gap = std::max({gap, m_gt - e_ge, e_gt - m_ge});
  }
  const double shell = polar->max_cell_measure();
  return make_check("euclidean_emulation_profile", gap, shell, shell - gap, 0.0);
}

namespace {

std::vector<CheckResult> manifold_oracles(const SuiteConfig& cfg) {
  std::vector<CheckResult> out;
  const auto fine = polar_grid(40000, 2.0);
  {
    Rng rng(derive_seed(cfg.seed, 0x72737472ULL));
    double worst = 0.0;
    double wl = 0.0, wr = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double v = rng.uniform(0.0, fine->total_volume());
      const double r = manifold::rearrange_set_M(v, *fine);
      const double exact = std::sqrt(v / kPi);
      if (std::abs(r - exact) >= worst) {
        worst = std::abs(r - exact);
        wl = r;
        wr = exact;
      }
    }
    out.push_back(near("rstar_polar_closed_form", wl, wr, 1e-8));
    const double v = 0.37 * fine->total_volume();
    const double a = manifold::rearrange_set_M(v, *fine, 0.0, 2.0);
    const double b = manifold::rearrange_set_M(v, *fine, 0.1, 1.9);
    out.push_back(near("rstar_uniqueness", a, b, 1e-8));
    out.push_back(make_check("rstar_empty", manifold::rearrange_set_M(0.0, *fine), 0.0,
                             -std::abs(manifold::rearrange_set_M(0.0, *fine)), 0.0));
    double edge_worst = 0.0;
    for (std::size_t i = 0; i < fine->r_edges().size(); i += 997)
      edge_worst = std::max(edge_worst, std::abs(manifold::rearrange_set_M(fine->edge_volumes()[i], *fine) -
                                                 fine->r_edges()[i]));
    out.push_back(make_check("rstar_inverts_cumulative_volume", edge_worst, 0.0, -edge_worst, 1e-8));
  }
  const auto polar = polar_grid(200, 2.0);
  {
    std::vector<std::uint8_t> annulus(200, 0);
    for (std::size_t i = 60; i < 120; ++i) annulus[i] = 1;
    CheckResult c = manifold::check_isoperimetric_M(*polar, annulus);
    c.name = "isoperimetric_M_annulus";
    out.push_back(c);
    std::vector<std::uint8_t> slabs(200, 0);
    for (std::size_t i = 20; i < 40; ++i) slabs[i] = 1;
    for (std::size_t i = 100; i < 130; ++i) slabs[i] = 1;
    c = manifold::check_isoperimetric_M(*polar, slabs);
    c.name = "isoperimetric_M_two_slabs";
    out.push_back(c);
    // non-monotone weight: observed only
    const WeightedRadialGrid wavy = WeightedRadialGrid::from_weight(
        [](double r) { return 1.0 + 0.5 * std::sin(6.0 * r); }, WeightedRadialGrid::uniform_edges(0.0, 2.0, 200), 1.0);
    c = manifold::check_isoperimetric_M(wavy, annulus);
    c.name = "isoperimetric_M_wavy_weight";
    out.push_back(c);
  }
  {
    std::vector<double> bump(200, 0.0);
    for (std::size_t i = 0; i < 200; ++i) {
      const double u = (polar->center(i) - 1.2) / 0.3;
      bump[i] = std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
    }
    CheckResult c = manifold::check_polya_szego_M(ManifoldField::radial(polar, bump), 2.0);
    c.name = "polya_szego_M_shifted_bump";
    out.push_back(c);
    const auto cyl = std::make_shared<const WeightedRadialGrid>(WeightedRadialGrid::uniform_edges(0.0, 2.0, 200),
                                                                std::vector<double>(200, 1.0), 1.0);
    c = manifold::check_polya_szego_M(ManifoldField::radial(cyl, bump), 1.0);
    c.name = "polya_szego_M_cylinder";
    out.push_back(c);
  }
  out.push_back(euclidean_emulation_check(129));
  return out;
}

}  // namespace

namespace {

std::vector<Task> build_tasks(const SuiteConfig& cfg) {
  std::vector<Task> tasks;
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "rearrangement")
    for (int t = 0; t < cfg.trials; ++t) tasks.emplace_back([cfg, t] { return rearrangement_trial(cfg, t); });
  if (all || cfg.suite == "geometry") {
    tasks.emplace_back([] { return geometry_disk_oracles(); });
    tasks.emplace_back([] { return geometry_coarea_oracles(); });
    tasks.emplace_back([] { return geometry_exact_oracles(); });
    for (int t = 0; t < cfg.trials; ++t) tasks.emplace_back([cfg, t] { return geometry_trial(cfg, t); });
  }
  if (all || cfg.suite == "pde") {
    tasks.emplace_back([] { return pde_manufactured(); });
    tasks.emplace_back([] { return pde_eigen_oracles(); });
    const int n = std::min(cfg.trials, 10);
    for (int t = 0; t < n; ++t) tasks.emplace_back([cfg, t] { return pde_trial(cfg, t); });
  }
  if (all || cfg.suite == "manifold") {
    tasks.emplace_back([cfg] { return manifold_oracles(cfg); });
    for (int t = 0; t < cfg.trials; ++t) tasks.emplace_back([cfg, t] { return manifold_trial(cfg, t); });
  }
  return tasks;
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.config = cfg;
  r.checks = run_tasks(build_tasks(cfg), cfg.threads > 0 ? cfg.threads : threads_from_env());
  std::stable_sort(r.checks.begin(), r.checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  apply_tol_scale(r.checks, cfg.tol_scale);
  r.tally();
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"tol", c.tol},
                      {"pass", c.pass}, {"judged", c.judged}, {"seed", c.seed}});
  const auto& k = r.config;
  json j{{"tool", "symmcal"},
         {"version", r.tool_version},
         {"config",
          {{"suite", k.suite}, {"dim", k.dim}, {"size", k.size}, {"trials", k.trials}, {"seed", k.seed},
           {"tol_scale", k.tol_scale}, {"out", k.out}, {"format", k.format}}},
         {"checks", checks},
         {"summary", {{"total", r.checks.size()}, {"passed", r.passed}, {"failed", r.failed}, {"unjudged", r.unjudged}}},
         {"wall_time_s", r.wall_time_s}};
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    VerificationReport r;
    r.tool_version = j.at("version").get<std::string>();
    const auto& k = j.at("config");
    r.config.suite = k.at("suite").get<std::string>();
    r.config.dim = k.at("dim").get<int>();
    r.config.size = k.at("size").get<std::size_t>();
    r.config.trials = k.at("trials").get<int>();
    r.config.seed = k.at("seed").get<std::uint64_t>();
    r.config.tol_scale = k.at("tol_scale").get<double>();
    r.config.out = k.value("out", "");
    r.config.format = k.value("format", "json");
    for (const auto& c : j.at("checks"))
      r.checks.push_back(CheckResult{c.at("name").get<std::string>(), c.at("lhs").get<double>(),
                                     c.at("rhs").get<double>(), c.at("slack").get<double>(),
                                     c.at("tol").get<double>(), c.at("pass").get<bool>(),
                                     c.at("seed").get<std::uint64_t>(), c.value("judged", true)});
    r.tally();
    const auto& s = j.at("summary");
    if (s.at("passed").get<std::size_t>() != r.passed || s.at("failed").get<std::size_t>() != r.failed ||
        s.at("total").get<std::size_t>() != r.checks.size())
      throw IoError("report summary does not match its checks");
    r.wall_time_s = j.at("wall_time_s").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

std::string report_to_csv(const VerificationReport& r) {
  std::ostringstream out;
  out << "name,lhs,rhs,slack,tol,pass\n";
  char buf[256];
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%d\n", c.name.c_str(), c.lhs, c.rhs, c.slack, c.tol,
                  c.pass ? 1 : 0);
    out << buf;
  }
  return out.str();
}

void emit_csv(const VerificationReport& r, const std::string& path) { write_text(path, report_to_csv(r)); }

}  // namespace symmcal
