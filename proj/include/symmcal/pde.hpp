#pragma once

// Dirichlet Poisson and eigenvalue solvers on masked grids, heat smoothing,
// and the symmetrisation comparison checks built on them.

#include <stdexcept>
#include <vector>

#include "symmcal/check.hpp"
#include "symmcal/grid.hpp"

namespace symmcal {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class DisconnectedDomain : public std::invalid_argument {
 public:
  DisconnectedDomain() : std::invalid_argument("domain is not connected") {}
};

struct PoissonSolution {
  ScalarField u;
  double residual_norm;  ///< ||f - A u|| / ||f||
  int iterations;
};

struct EigenResult {
  double lambda1;
  ScalarField eigenfield;  ///< non-negative, unit L2 norm
  double residual;         ///< ||A phi - lambda phi|| / lambda
  int iterations;
};

/// -Laplacian with the 2n+1 point stencil, u = 0 on cells outside omega.
void apply_dirichlet_laplacian(const RegionMask& omega, const std::vector<double>& x,
                               std::vector<double>& y);

/// Conjugate gradients to ||f - Au|| <= rel_tol ||f||, at most 50 N iterations.
PoissonSolution solve_poisson(const ScalarField& f, const RegionMask& omega, double rel_tol = 1e-10);

bool is_connected(const RegionMask& omega);

/// Inverse power iteration with inner CG solves until the Rayleigh quotient
/// changes by at most 1e-10 lambda.
EigenResult smallest_dirichlet_eigenvalue(const RegionMask& omega);

/// First Dirichlet eigenvalue of the n-ball of radius R from radial shooting
/// on u'' + (n-1)/r u' + lambda u = 0.
double radial_dirichlet_eigenvalue(int n, double radius);

/// Centred square of side `fraction` of the grid extent, the default domain
/// for comparison checks (its rearrangement stays inside the grid).
RegionMask comparison_domain(const Grid& grid, double fraction = 0.7);

/// u solves -Lap u = f on omega, v solves -Lap v = f* on omega*.
/// Checks u* <= v + 0.02 max v cellwise; slack is the smallest margin.
CheckResult check_talenti(const ScalarField& f, const RegionMask& omega);
CheckResult check_talenti(const ScalarField& f);

/// ||grad u||_2 <= ||grad v||_2 with the Talenti pair, tolerance 1% of scale.
CheckResult check_gradient_domination(const ScalarField& f, const RegionMask& omega);
CheckResult check_gradient_domination(const ScalarField& f);

/// Sum of squared forward differences over every cell face, cells outside
/// the grid counting as 0; equals <u, A u> for the masked Laplacian.
double dirichlet_energy(const ScalarField& u);

/// Discrete ||grad u||_2^2 against integral u f for u = solve(f, omega).
CheckResult check_energy_identity(const ScalarField& f, const RegionMask& omega);

/// Convolution with the unit-mass truncated Gaussian exp(-|x|^2 / 4t),
/// truncation radius 5 sqrt(2t). Throws when the kernel is wider than the grid.
ScalarField heat_smooth(const ScalarField& f, double t);

/// Newtonian potential sum_y f(y) / |x - y| * cellvol on an isotropic 3-D
/// grid; the self term uses the cell average of 1/|x|.
ScalarField newtonian_potential(const ScalarField& f);
/// Cell average of 1/|x| over the unit cube centred at 0.
double unit_cube_inverse_distance_average();

/// integral over centred balls B of u* <= integral over B of v at 10 radii,
/// where u and v are the potentials of f and f*. Tolerance 1% of scale.
CheckResult check_potential_domination(const ScalarField& f);

/// lambda1(omega) >= lambda1(omega*), tolerance 1% of lambda1(omega*).
CheckResult check_faber_krahn(const RegionMask& omega);

}  // namespace symmcal
