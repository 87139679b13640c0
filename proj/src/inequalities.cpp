#include "symmcal/inequalities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "symmcal/rearrange.hpp"

namespace symmcal {

ConvexFunction ConvexFunction::abs_power(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("abs_power needs p >= 1");
  return ConvexFunction(Kind::AbsPower, p);
}

ConvexFunction ConvexFunction::parse(const std::string& name) {
  if (name == "pos_sq") return positive_square();
  if (name == "smooth_hinge") return smooth_hinge();
  const std::string prefix = "abs_pow:";
  if (name.rfind(prefix, 0) == 0) return abs_power(std::stod(name.substr(prefix.size())));
  throw std::invalid_argument("convex function not in catalogue: " + name);
}

double ConvexFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::AbsPower:
      return p_ == 2.0 ? x * x : std::pow(std::abs(x), p_);
    case Kind::PositiveSquare:
      return x > 0.0 ? x * x : 0.0;
    case Kind::SmoothHinge:
      if (x <= 0.0) return 0.0;
      return x < 1.0 ? 0.5 * x * x : x - 0.5;
  }
  return 0.0;
}

std::string ConvexFunction::name() const {
  switch (kind_) {
    case Kind::AbsPower: {
      std::string s = std::to_string(p_);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return "abs_pow:" + s;
    }
    case Kind::PositiveSquare:
      return "pos_sq";
    case Kind::SmoothHinge:
      return "smooth_hinge";
  }
  return "";
}

namespace {

void require_nonneg(const ScalarField& f, const char* what) {
  for (double v : f.values)
    if (v < 0.0) throw std::domain_error(std::string(what) + " needs non-negative fields");
}

std::string p_name(const char* base, double p) {
  if (std::isinf(p)) return std::string(base) + "_pinf";
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return std::string(base) + "_p" + s;
}

}  // namespace

CheckResult check_lp_preservation(const ScalarField& f, double p) {
  const double lhs = lp_norm(f, p);
  const double rhs = lp_norm(rearrange_field(f), p);
  return make_check(p_name("lp_preservation", p), lhs, rhs, -std::abs(lhs - rhs),
                    1e-12 * check_scale(lhs, rhs));
}

CheckResult check_hardy_littlewood(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid);
  require_nonneg(f, "check_hardy_littlewood");
  require_nonneg(g, "check_hardy_littlewood");
  const double lhs = inner_product(f, g);
  const double rhs = inner_product(rearrange_field(f), rearrange_field(g));
  return make_check("hardy_littlewood", lhs, rhs, rhs - lhs, 1e-12 * check_scale(lhs, rhs));
}

CheckResult check_complement_lemma(const ScalarField& f, const ScalarField& g, double s) {
  require_same_grid(f.grid, g.grid);
  require_nonneg(f, "check_complement_lemma");
  require_nonneg(g, "check_complement_lemma");
  const double lhs = inner_product(f, indicator(sub_level_set(g, s)));
  const double rhs =
      inner_product(rearrange_field(f), indicator(sub_level_set(rearrange_field(g), s)));
  return make_check("complement_lemma", lhs, rhs, lhs - rhs, 1e-12 * check_scale(lhs, rhs));
}

CheckResult check_lp_contraction(const ScalarField& f, const ScalarField& g, double p) {
  require_same_grid(f.grid, g.grid);
  require_nonneg(f, "check_lp_contraction");
  require_nonneg(g, "check_lp_contraction");
  const double rhs = lp_norm(f - g, p);
  const double lhs = lp_norm(rearrange_field(f) - rearrange_field(g), p);
  return make_check(p_name("lp_contraction", p), lhs, rhs, rhs - lhs,
                    1e-12 * check_scale(lhs, rhs));
}

CheckResult check_nonexpansivity(const ScalarField& f, const ScalarField& g,
                                 const ConvexFunction& j) {
  require_same_grid(f.grid, g.grid);
  require_nonneg(f, "check_nonexpansivity");
  require_nonneg(g, "check_nonexpansivity");
  const ScalarField fs = rearrange_field(f);
  const ScalarField gs = rearrange_field(g);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    a += j(f.values[i] - g.values[i]);
    b += j(fs.values[i] - gs.values[i]);
  }
  const double cv = f.grid.cell_volume();
  const double rhs = a * cv;
  const double lhs = b * cv;
  return make_check("nonexpansivity_" + j.name(), lhs, rhs, rhs - lhs,
                    1e-10 * check_scale(lhs, rhs));
}

CheckResult check_riesz(const ScalarField& f, const ScalarField& g, const ScalarField& h) {
  require_same_grid(f.grid, g.grid);
  require_same_grid(f.grid, h.grid);
  require_nonneg(f, "check_riesz");
  require_nonneg(g, "check_riesz");
  require_nonneg(h, "check_riesz");
  const double lhs = inner_product(f, convolve(g, h));
  const double rhs =
      inner_product(rearrange_field(f), convolve(rearrange_field(g), rearrange_field(h)));
  return make_check("riesz", lhs, rhs, rhs - lhs, 1e-10 * check_scale(lhs, rhs));
}

CheckResult check_sobolev_quotient(const ScalarField& f, double p) {
  const int n = f.grid.dim();
  if (!(p >= 1.0) || !(p < static_cast<double>(n)))
    throw std::domain_error("check_sobolev_quotient needs 1 <= p < n");
  const double pstar = static_cast<double>(n) * p / (static_cast<double>(n) - p);
  const ScalarField fs = rearrange_field(f);
  const double rhs = lp_norm(gradient_magnitude(f), p) / lp_norm(f, pstar);
  const double lhs = lp_norm(gradient_magnitude(fs), p) / lp_norm(fs, pstar);
  return make_check(p_name("sobolev_quotient", p), lhs, rhs, rhs - lhs, 0.02 * rhs);
}

ScalarField gaussian_kernel(const Grid& grid, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel needs sigma > 0");
  ScalarField k(grid);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double total = 0.0;
  const int pad = kMaxDim - grid.dim();
  const double cutoff = 36.0 * sigma * sigma;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    const Offset3 o = detail::kernel_offset(grid, i);
    double r2 = 0.0;
    if (grid.isotropic()) {
      // integer offsets keep equal-radius cells bitwise equal
      long q = 0;
      for (int a = pad; a < kMaxDim; ++a) q += o[static_cast<std::size_t>(a)] * o[static_cast<std::size_t>(a)];
      r2 = static_cast<double>(q) * grid.spacing()[0] * grid.spacing()[0];
    } else {
      for (int a = 0; a < grid.dim(); ++a) {
        const double x = static_cast<double>(o[static_cast<std::size_t>(pad + a)]) *
                         grid.spacing()[static_cast<std::size_t>(a)];
        r2 += x * x;
      }
    }
    if (r2 > cutoff) continue;
    k.values[i] = std::exp(-r2 * inv);
    total += k.values[i];
  }
  const double scale = 1.0 / (total * grid.cell_volume());
  for (double& v : k.values) v *= scale;
  return k;
}

}  // namespace symmcal
