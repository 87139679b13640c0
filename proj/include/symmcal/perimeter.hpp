#pragma once

// Perimeter estimators, co-area checks and isoperimetric-type inequalities.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "symmcal/check.hpp"
#include "symmcal/grid.hpp"

namespace symmcal {

enum class PerimeterMethod { FaceCount, SmoothedGradient, Minkowski, Convolution };

std::string to_string(PerimeterMethod m);
PerimeterMethod parse_perimeter_method(const std::string& s);

struct PerimeterEstimate {
  PerimeterMethod method;
  double value;      ///< length^{n-1}
  double parameter;  ///< delta or smoothing width; 0 for face counting
};

class UnderResolved : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MarginOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Boundary-face measure. Axis-anisotropic; overestimates curved boundaries.
/// For n = 1 the value is the number of member/non-member transitions.
PerimeterEstimate perimeter_face_count(const RegionMask& a);

/// Vol((A + B_delta) \ A) / delta. The outer ring is measured from an exact
/// distance transform with partial coverage at its outer edge; the set's
/// boundary is taken kMinkowskiEnvelope cells beyond the member centres.
PerimeterEstimate perimeter_minkowski(const RegionMask& a, double delta);
inline constexpr double kMinkowskiEnvelope = 0.3;
/// Ring volume Vol((A + B_delta) \ A) used by perimeter_minkowski.
double minkowski_ring_volume(const RegionMask& a, double delta);

/// C(n)/delta^{n+1} * integral over A of X_{A^c} * X_{B_delta}, C(n) = (n+1)/omega_{n-1}.
PerimeterEstimate perimeter_convolution(const RegionMask& a, double delta);

/// Integral of |grad (X_A blurred by a Gaussian of standard deviation width)|.
PerimeterEstimate perimeter_smoothed_gradient(const RegionMask& a, double width);

/// lhs = integral |grad f|, rhs = integral over thresholds of Per({f > t}).
/// Per is the two-scale Minkowski estimate 2M(delta) - M(2 delta) with
/// delta = 4h, which removes the first-order Steiner term. Quadrature is the
/// trapezoid rule over the thresholds plus a rectangle on (0, t_1].
CheckResult coarea_check(const ScalarField& f, const std::vector<double>& thresholds);
/// Thresholds t_i = i max(f) / count, i = 1..count.
CheckResult coarea_check(const ScalarField& f, int count);
double coarea_gap(const CheckResult& r);

/// Vol({t < f <= t + dt} and {|grad f| > eps}) / dt. eps defaults to
/// 1e-6 max |grad f|.
double coarea_density(const ScalarField& f, double t, double dt, std::optional<double> eps = {});

/// Dilation of A by the cell offsets of B (offset zero at Grid::kernel_center).
/// Throws MarginOverflow when the sum would leave the grid.
RegionMask minkowski_sum(const RegionMask& a, const RegionMask& b);

/// Vol(A+B)^{1/n} >= Vol(A)^{1/n} + Vol(B)^{1/n}, tolerance one cell edge
/// (the n-th root of the cell volume).
CheckResult check_brunn_minkowski(const RegionMask& a, const RegionMask& b);

/// Per(A) >= n omega_n^{1/n} Vol(A)^{(n-1)/n}, tolerance 3% of the right side.
CheckResult check_sharp_isoperimetric(const RegionMask& a, std::optional<double> delta = {});

/// Per(A) >= Per(A*) with Minkowski perimeters, tolerance 3% of scale.
CheckResult check_isoperimetric_mask(const RegionMask& a, std::optional<double> delta = {});

/// ||grad f*||_p <= ||grad f||_p, tolerance 2% of scale.
CheckResult check_polya_szego(const ScalarField& f, double p);

struct Polygon {
  std::vector<std::array<double, 2>> vertices;
};

double polygon_signed_area(const Polygon& p);
double polygon_length(const Polygon& p);
bool polygon_is_simple(const Polygon& p);

/// L^2 >= 4 pi A. Clockwise input is reoriented; self-intersecting input is
/// rejected with std::invalid_argument.
CheckResult check_planar_polygon(const Polygon& p);

/// Default Minkowski radius: 4 cells.
double default_delta(const Grid& g);

}  // namespace symmcal
