#include "symmcal/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace symmcal::manifold {

WeightedRadialGrid::WeightedRadialGrid(std::vector<double> r_edges, std::vector<double> phi,
                                       double sigma_measure, std::vector<double> sigma_cells)
    : r_edges_(std::move(r_edges)), phi_(std::move(phi)), sigma_measure_(sigma_measure),
      sigma_cells_(std::move(sigma_cells)) {
  if (r_edges_.size() < 2) throw std::invalid_argument("radial grid needs at least one cell");
  if (phi_.size() + 1 != r_edges_.size())
    throw std::invalid_argument("phi needs one value per radial cell");
  if (!(r_edges_.front() >= 0.0)) throw std::invalid_argument("first radial edge must be >= 0");
  for (std::size_t i = 1; i < r_edges_.size(); ++i)
    if (!(r_edges_[i] > r_edges_[i - 1]) || !std::isfinite(r_edges_[i]))
      throw std::invalid_argument("radial edges must be strictly increasing and finite");
  for (double v : phi_)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("phi must be positive");
  if (!(sigma_measure_ > 0.0) || !std::isfinite(sigma_measure_))
    throw std::invalid_argument("sigma_measure must be positive");
  if (sigma_cells_.empty()) sigma_cells_.push_back(sigma_measure_);
  double total = 0.0;
  for (double w : sigma_cells_) {
    if (!(w > 0.0)) throw std::invalid_argument("cross-section weights must be positive");
    total += w;
  }
  if (std::abs(total - sigma_measure_) > 1e-12 * sigma_measure_)
    throw std::invalid_argument("cross-section weights must sum to sigma_measure");
  edge_volume_.assign(r_edges_.size(), 0.0);
  for (std::size_t i = 0; i < phi_.size(); ++i)
    edge_volume_[i + 1] = edge_volume_[i] + sigma_measure_ * phi_[i] * width(i);
}

WeightedRadialGrid WeightedRadialGrid::from_weight(const std::function<double(double)>& phi,
                                                   std::vector<double> r_edges, double sigma_measure,
                                                   std::vector<double> sigma_cells) {
  std::vector<double> avg(r_edges.size() > 0 ? r_edges.size() - 1 : 0);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const double a = r_edges[i];
    const double b = r_edges[i + 1];
    avg[i] = (phi(a) + 4.0 * phi(0.5 * (a + b)) + phi(b)) / 6.0;
  }
  return WeightedRadialGrid(std::move(r_edges), std::move(avg), sigma_measure, std::move(sigma_cells));
}

std::vector<double> WeightedRadialGrid::uniform_edges(double r0, double r1, std::size_t cells) {
  if (cells < 1 || !(r1 > r0)) throw std::invalid_argument("uniform_edges needs r1 > r0 and cells >= 1");
  std::vector<double> e(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i)
    e[i] = r0 + (r1 - r0) * static_cast<double>(i) / static_cast<double>(cells);
  return e;
}

double WeightedRadialGrid::cell_measure(std::size_t flat) const {
  const std::size_t q = cross_cells();
  const std::size_t i = flat / q;
  return phi_[i] * width(i) * sigma_cells_[flat % q];
}

double WeightedRadialGrid::max_cell_measure() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k) m = std::max(m, cell_measure(k));
  return m;
}

double WeightedRadialGrid::phi_at(double r) const {
  const std::size_t m = radial_cells();
  if (m == 1) return phi_[0];
  std::size_t i = 0;
  if (r <= center(0)) {
    i = 0;
  } else if (r >= center(m - 1)) {
    i = m - 2;
  } else {
    // last cell whose centre is below r
    std::size_t lo = 0, hi = m - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (center(mid) < r ? lo : hi) = mid;
    }
    i = lo;
  }
  const double t = (r - center(i)) / (center(i + 1) - center(i));
  const double v = phi_[i] + t * (phi_[i + 1] - phi_[i]);
  return std::max(v, 0.0);
}

bool WeightedRadialGrid::phi_non_decreasing() const {
  return std::is_sorted(phi_.begin(), phi_.end());
}

ManifoldField::ManifoldField(std::shared_ptr<const WeightedRadialGrid> g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("manifold field needs a grid");
  if (values.size() != grid->size())
    throw std::invalid_argument("manifold field value count does not match the grid");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("manifold field values must be finite");
}

ManifoldField ManifoldField::radial(std::shared_ptr<const WeightedRadialGrid> g,
                                    const std::vector<double>& profile) {
  if (!g || profile.size() != g->radial_cells())
    throw std::invalid_argument("radial profile needs one value per radial cell");
  std::vector<double> v(g->size());
  const std::size_t q = g->cross_cells();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = profile[k / q];
  return ManifoldField(std::move(g), std::move(v));
}

bool ManifoldField::is_radial() const {
  const std::size_t q = grid->cross_cells();
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] != values[k - k % q]) return false;
  return true;
}

std::vector<double> ManifoldField::profile() const {
  if (!is_radial()) throw std::invalid_argument("field is not radial");
  const std::size_t q = grid->cross_cells();
  std::vector<double> p(grid->radial_cells());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = values[i * q];
  return p;
}

double cumulative_volume(const WeightedRadialGrid& g, double r) {
  if (r < 0.0) throw std::domain_error("cumulative_volume needs r >= 0");
  const auto& e = g.r_edges();
  if (r <= e.front()) return 0.0;
  if (r >= e.back()) {
    if (r > e.back() * (1.0 + 1e-12)) throw std::out_of_range("radius beyond the grid");
    return g.total_volume();
  }
  const auto it = std::upper_bound(e.begin(), e.end(), r);
  const auto i = static_cast<std::size_t>(it - e.begin()) - 1;
  const auto& F = g.edge_volumes();
  return F[i] + (r - e[i]) / g.width(i) * (F[i + 1] - F[i]);
}

double rearrange_set_M(double vol, const WeightedRadialGrid& g) {
  return rearrange_set_M(vol, g, g.r_edges().front(), g.r_max());
}

double rearrange_set_M(double vol, const WeightedRadialGrid& g, double lo, double hi) {
  if (vol < 0.0 || !std::isfinite(vol)) throw std::domain_error("volume must be finite and >= 0");
  if (vol == 0.0) return 0.0;
  if (vol > g.total_volume()) throw CapacityExceeded();
  lo = std::max(lo, g.r_edges().front());
  hi = std::min(hi, g.r_max());
  if (!(cumulative_volume(g, lo) <= vol && cumulative_volume(g, hi) >= vol))
    throw std::invalid_argument("bracket does not contain the target volume");
  const double tol = 1e-10 * std::max(vol, 1.0);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = cumulative_volume(g, mid);
    if (std::abs(fm - vol) <= tol && hi - lo <= 1e-12 * std::max(hi, 1.0)) return mid;
    if (mid == lo || mid == hi) return mid;
    (fm < vol ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double distribution_M(const ManifoldField& f, double t) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.values[k] > t) s += f.grid->cell_measure(k);
  return s;
}

ManifoldField rearrange_field_M(const ManifoldField& f) {
  for (double v : f.values)
    if (v < 0.0) throw std::domain_error("rearrange_field_M needs a non-negative field");
  const auto& g = *f.grid;
  // candidate levels, descending, with mu(level) = measure of cells strictly above
  std::vector<std::size_t> idx(f.values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return f.values[a] > f.values[b]; });
  std::vector<double> level;
  std::vector<double> mu;
  double above = 0.0;
  for (std::size_t p = 0; p < idx.size();) {
    const double v = f.values[idx[p]];
    level.push_back(v);
    mu.push_back(above);
    while (p < idx.size() && f.values[idx[p]] == v) above += g.cell_measure(idx[p++]);
  }
  if (level.empty() || level.back() > 0.0) {
    level.push_back(0.0);
    mu.push_back(above);
  }
  const double slop = 1e-12 * g.total_volume();
  std::vector<double> out(f.values.size());
  std::size_t j = 0;
  double before = 0.0;  // V_{k-1}
  for (std::size_t k = 0; k < out.size(); ++k) {
    while (j + 1 < level.size() && mu[j + 1] <= before + slop) ++j;
    out[k] = level[j];
    before += g.cell_measure(k);
  }
  return ManifoldField(f.grid, std::move(out));
}

CheckResult check_level_sets_M(const ManifoldField& f, double t) {
  const auto& g = *f.grid;
  const ManifoldField fs = rearrange_field_M(f);
  const double target = distribution_M(f, t);
  const double rstar = rearrange_set_M(target, g);
  const std::size_t q = g.cross_cells();
  const auto& e = g.r_edges();
  const auto& F = g.edge_volumes();
  double symdiff = 0.0;
  for (std::size_t k = 0; k < fs.values.size(); ++k) {
    const std::size_t i = k / q;
    double inside = 0.0;
    if (rstar > e[i]) {
      const double top = std::min(rstar, e[i + 1]);
      inside = (cumulative_volume(g, top) - F[i]) / (F[i + 1] - F[i]);
    }
    const double m = g.cell_measure(k);
    symdiff += (fs.values[k] > t ? 1.0 - inside : inside) * m;
  }
  // the slab boundary cuts one shell; a partly filled shell can differ from
  // the slab by up to that shell's measure
  double shell = 0.0;
  for (std::size_t i = 0; i + 1 < F.size(); ++i) shell = std::max(shell, F[i + 1] - F[i]);
  return make_check("level_sets_M", distribution_M(fs, t), target, -symdiff, shell * (1.0 + 1e-12));
}

double lp_norm_M(const ManifoldField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw std::domain_error("lp_norm_M needs p >= 1");
  double s = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    s += std::pow(std::abs(f.values[k]), p) * f.grid->cell_measure(k);
  return std::pow(s, 1.0 / p);
}

namespace {

double max_abs(const ManifoldField& f) { return lp_norm_M(f, std::numeric_limits<double>::infinity()); }

void require_same(const ManifoldField& f, const ManifoldField& g) {
  if (!(f.grid == g.grid || *f.grid == *g.grid))
    throw std::invalid_argument("manifold fields live on different grids");
}

std::string p_suffix(double p) {
  if (std::isinf(p)) return "_pinf";
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "_p" + s;
}

}  // namespace

CheckResult check_lp_M(const ManifoldField& f, double p) {
  const double lhs = lp_norm_M(f, p);
  const double rhs = lp_norm_M(rearrange_field_M(f), p);
  // one transitional cell per level telescopes to max|f| * max cell measure
  const double cell = std::isinf(p) ? 0.0 : max_abs(f) * std::pow(f.grid->max_cell_measure(), 1.0 / p);
  const double tol = std::max(1e-9 * check_scale(lhs, rhs), cell);
  return make_check("lp_M" + p_suffix(p), lhs, rhs, -std::abs(lhs - rhs), tol);
}

CheckResult check_hardy_littlewood_M(const ManifoldField& f, const ManifoldField& g) {
  require_same(f, g);
  const ManifoldField fs = rearrange_field_M(f);
  const ManifoldField gs = rearrange_field_M(g);
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double m = f.grid->cell_measure(k);
    lhs += f.values[k] * g.values[k] * m;
    rhs += fs.values[k] * gs.values[k] * m;
  }
  const double tol = std::max(1e-9 * check_scale(lhs, rhs),
                              max_abs(f) * max_abs(g) * f.grid->max_cell_measure());
  return make_check("hardy_littlewood_M", lhs, rhs, rhs - lhs, tol);
}

CheckResult check_lp_contraction_M(const ManifoldField& f, const ManifoldField& g, double p) {
  require_same(f, g);
  const ManifoldField fs = rearrange_field_M(f);
  const ManifoldField gs = rearrange_field_M(g);
  std::vector<double> d(f.values.size()), ds(f.values.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = f.values[k] - g.values[k];
    ds[k] = fs.values[k] - gs.values[k];
  }
  const double rhs = lp_norm_M(ManifoldField(f.grid, d), p);
  const double lhs = lp_norm_M(ManifoldField(f.grid, ds), p);
  const double cell =
      std::isinf(p) ? 0.0 : (max_abs(f) + max_abs(g)) * std::pow(f.grid->max_cell_measure(), 1.0 / p);
  const double tol = std::max(1e-9 * check_scale(lhs, rhs), cell);
  return make_check("lp_contraction_M" + p_suffix(p), lhs, rhs, rhs - lhs, tol);
}

double gram_jacobian(const LinearMapMatrix& t) {
  if (t.rows < t.cols) throw std::invalid_argument("gram_jacobian needs rows >= cols");
  if (t.entries.size() != t.rows * t.cols) throw std::invalid_argument("matrix entry count mismatch");
  if (t.cols == 0) return 1.0;
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      t.entries.data(), static_cast<Eigen::Index>(t.rows), static_cast<Eigen::Index>(t.cols));
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() < static_cast<Eigen::Index>(t.cols)) return 0.0;
  return std::abs(qr.matrixR().diagonal().prod());
}

CheckResult coarea_M_check(const ManifoldField& f, const std::string& level_function) {
  if (level_function != "r")
    throw std::invalid_argument("coarea_M_check supports only the radial level function r");
  const auto& g = *f.grid;
  const std::size_t q = g.cross_cells();
  double lhs = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) lhs += f.values[k] * g.cell_measure(k);
  double rhs = 0.0;
  for (std::size_t i = 0; i < g.radial_cells(); ++i) {
    double shell = 0.0;
    for (std::size_t j = 0; j < q; ++j) shell += f.values[i * q + j] * g.phi()[i] * g.sigma_cells()[j];
    rhs += shell * g.width(i);
  }
  return make_check("coarea_M", lhs, rhs, -std::abs(lhs - rhs), 1e-12 * check_scale(lhs, rhs));
}

CheckResult check_isoperimetric_M(const WeightedRadialGrid& g, const std::vector<std::uint8_t>& shells) {
  if (shells.size() != g.radial_cells())
    throw std::invalid_argument("shell membership needs one entry per radial cell");
  const auto& e = g.r_edges();
  const double s = g.sigma_measure();
  double per = 0.0;
  double vol = 0.0;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (shells[i]) vol += s * g.phi()[i] * g.width(i);
    if (i > 0 && (shells[i] != 0) != (shells[i - 1] != 0)) per += s * g.phi_at(e[i]);
  }
  if (shells.back()) per += s * g.phi_at(e.back());
  const double rstar = rearrange_set_M(std::min(vol, g.total_volume()), g);
  const double per_star = vol == 0.0 ? 0.0 : s * g.phi_at(rstar);
  const double slack = per - per_star;
  if (!g.phi_non_decreasing()) return make_unjudged("isoperimetric_M", per_star, per, slack);
  return make_check("isoperimetric_M", per_star, per, slack, 1e-10 * check_scale(per, per_star));
}

double radial_gradient_norm(const WeightedRadialGrid& g, const std::vector<double>& profile, double p) {
  if (profile.size() != g.radial_cells()) throw std::invalid_argument("profile size mismatch");
  if (!(p >= 1.0)) throw std::domain_error("radial_gradient_norm needs p >= 1");
  const auto& e = g.r_edges();
  const double s = g.sigma_measure();
  const std::size_t m = profile.size();
  double acc = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double dc = g.center(i) - g.center(i - 1);
    const double d = (profile[i] - profile[i - 1]) / dc;
    acc += std::pow(std::abs(d), p) * g.phi_at(e[i]) * s * dc;
  }
  const double half = 0.5 * g.width(m - 1);
  acc += std::pow(std::abs(profile[m - 1]) / half, p) * g.phi_at(e.back()) * s * half;
  return std::pow(acc, 1.0 / p);
}

CheckResult check_polya_szego_M(const ManifoldField& f, double p) {
  const std::vector<double> prof = f.profile();
  const auto& g = *f.grid;
  auto collapsed = std::make_shared<const WeightedRadialGrid>(g.r_edges(), g.phi(), g.sigma_measure());
  const ManifoldField fs = rearrange_field_M(ManifoldField::radial(collapsed, prof));
  const double rhs = radial_gradient_norm(g, prof, p);
  const double lhs = radial_gradient_norm(g, fs.values, p);
  const std::string name = "polya_szego_M" + p_suffix(p);
  if (!g.phi_non_decreasing()) return make_unjudged(name, lhs, rhs, rhs - lhs);
  return make_check(name, lhs, rhs, rhs - lhs, 0.02 * check_scale(lhs, rhs));
}

}  // namespace symmcal::manifold
