#pragma once

// Rearrangement inequalities on Euclidean grids, each returned as a
// slack-quantified CheckResult.

#include <string>

#include "symmcal/check.hpp"
#include "symmcal/grid.hpp"

namespace symmcal {

/// Convex J >= 0 with J(0) = 0, from a fixed catalogue.
class ConvexFunction {
 public:
  enum class Kind { AbsPower, PositiveSquare, SmoothHinge };

  static ConvexFunction abs_power(double p);
  static ConvexFunction positive_square() { return ConvexFunction(Kind::PositiveSquare, 2.0); }
  /// 0 for x <= 0, x^2/2 on (0, 1), x - 1/2 for x >= 1.
  static ConvexFunction smooth_hinge() { return ConvexFunction(Kind::SmoothHinge, 1.0); }
  /// "abs_pow:<p>", "pos_sq" or "smooth_hinge"; throws on anything else.
  static ConvexFunction parse(const std::string& name);

  double operator()(double x) const;
  std::string name() const;
  Kind kind() const { return kind_; }

 private:
  ConvexFunction(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

CheckResult check_lp_preservation(const ScalarField& f, double p);
/// integral f g <= integral f* g*
CheckResult check_hardy_littlewood(const ScalarField& f, const ScalarField& g);
/// integral f X_{g<=s} >= integral f* X_{g*<=s}
CheckResult check_complement_lemma(const ScalarField& f, const ScalarField& g, double s);
/// ||f* - g*||_p <= ||f - g||_p
CheckResult check_lp_contraction(const ScalarField& f, const ScalarField& g, double p);
/// integral J(f* - g*) <= integral J(f - g)
CheckResult check_nonexpansivity(const ScalarField& f, const ScalarField& g, const ConvexFunction& j);
/// <f, g * h> <= <f*, g* * h*>
CheckResult check_riesz(const ScalarField& f, const ScalarField& g, const ScalarField& h);
/// ||grad f*||_p / ||f*||_{p*} <= ||grad f||_p / ||f||_{p*}, p* = np/(n-p)
CheckResult check_sobolev_quotient(const ScalarField& f, double p);

/// Unit-mass Gaussian exp(-|x|^2 / (2 sigma^2)) centred on the kernel cell,
/// truncated at 6 sigma.
ScalarField gaussian_kernel(const Grid& grid, double sigma);

}  // namespace symmcal
