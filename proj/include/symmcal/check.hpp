#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace symmcal {

/// One verified (or observed) inequality. pass <=> slack >= -tol.
struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  /// False for observations reported without a verdict; those always pass.
  bool judged = true;

  bool operator==(const CheckResult&) const = default;
};

/// max(|lhs|, |rhs|, 1)
inline double check_scale(double lhs, double rhs) {
  return std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

inline CheckResult make_check(std::string name, double lhs, double rhs, double slack, double tol,
                              std::uint64_t seed = 0) {
  CheckResult r{std::move(name), lhs, rhs, slack, tol, false, seed, true};
  r.pass = std::isfinite(slack) && slack >= -tol;
  return r;
}

inline CheckResult make_unjudged(std::string name, double lhs, double rhs, double slack,
                                 std::uint64_t seed = 0) {
  return CheckResult{std::move(name), lhs, rhs, slack, std::numeric_limits<double>::max(), true,
                     seed, false};
}

}  // namespace symmcal
