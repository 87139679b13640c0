#pragma once

// Rearrangement on weighted product manifolds M = (0, inf) x Sigma, with all
// metric data folded into a radial weight phi(r) and cross-section weights.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "symmcal/check.hpp"

namespace symmcal::manifold {

class CapacityExceeded : public std::out_of_range {
 public:
  CapacityExceeded() : std::out_of_range("volume exceeds the grid capacity (r* is infinite)") {}
};

class WeightedRadialGrid {
 public:
  /// phi holds one cell-average weight per radial cell; sigma_cells defaults
  /// to a single cross-section cell of measure sigma_measure.
  WeightedRadialGrid(std::vector<double> r_edges, std::vector<double> phi, double sigma_measure,
                     std::vector<double> sigma_cells = {});

  /// Cell averages of phi by Simpson's rule (exact for cubic weights).
  static WeightedRadialGrid from_weight(const std::function<double(double)>& phi,
                                        std::vector<double> r_edges, double sigma_measure,
                                        std::vector<double> sigma_cells = {});
  /// `cells` equal radial cells on [r0, r1].
  static std::vector<double> uniform_edges(double r0, double r1, std::size_t cells);

  const std::vector<double>& r_edges() const { return r_edges_; }
  const std::vector<double>& phi() const { return phi_; }
  double sigma_measure() const { return sigma_measure_; }
  const std::vector<double>& sigma_cells() const { return sigma_cells_; }

  std::size_t radial_cells() const { return phi_.size(); }
  std::size_t cross_cells() const { return sigma_cells_.size(); }
  std::size_t size() const { return radial_cells() * cross_cells(); }
  double width(std::size_t i) const { return r_edges_[i + 1] - r_edges_[i]; }
  double center(std::size_t i) const { return 0.5 * (r_edges_[i] + r_edges_[i + 1]); }
  double r_max() const { return r_edges_.back(); }

  /// phi_i * dr_i * w_j for flat index i * cross_cells + j.
  double cell_measure(std::size_t flat) const;
  double max_cell_measure() const;
  /// F at each radial edge.
  const std::vector<double>& edge_volumes() const { return edge_volume_; }
  double total_volume() const { return edge_volume_.back(); }
  /// phi at a radius, linear between cell centres, extrapolated at the ends.
  double phi_at(double r) const;
  bool phi_non_decreasing() const;

  bool operator==(const WeightedRadialGrid& o) const {
    return r_edges_ == o.r_edges_ && phi_ == o.phi_ && sigma_measure_ == o.sigma_measure_ &&
           sigma_cells_ == o.sigma_cells_;
  }

 private:
  std::vector<double> r_edges_;
  std::vector<double> phi_;
  double sigma_measure_;
  std::vector<double> sigma_cells_;
  std::vector<double> edge_volume_;
};

/// Values per (radial, cross-section) cell, flat index i * cross_cells + j.
struct ManifoldField {
  std::shared_ptr<const WeightedRadialGrid> grid;
  std::vector<double> values;

  ManifoldField(std::shared_ptr<const WeightedRadialGrid> g, std::vector<double> v);
  /// Same value on every cross-section cell of a radial shell.
  static ManifoldField radial(std::shared_ptr<const WeightedRadialGrid> g, const std::vector<double>& profile);
  bool is_radial() const;
  /// Value per radial shell; requires is_radial().
  std::vector<double> profile() const;
};

/// Row-major m x n matrix, m >= n.
struct LinearMapMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

/// F(r) = sigma * integral_0^r phi, linear inside a cell.
double cumulative_volume(const WeightedRadialGrid& g, double r);

/// r* with F(r*) = vol by bisection on [lo, hi] (defaults to the whole grid).
double rearrange_set_M(double vol, const WeightedRadialGrid& g);
double rearrange_set_M(double vol, const WeightedRadialGrid& g, double lo, double hi);

/// f*(cell k) = sup{t : mu_f(t) > V_{k-1}} over cells ordered by radius.
ManifoldField rearrange_field_M(const ManifoldField& f);

/// mu_f(t) with cell measures.
double distribution_M(const ManifoldField& f, double t);

CheckResult check_level_sets_M(const ManifoldField& f, double t);
CheckResult check_lp_M(const ManifoldField& f, double p);
CheckResult check_hardy_littlewood_M(const ManifoldField& f, const ManifoldField& g);
CheckResult check_lp_contraction_M(const ManifoldField& f, const ManifoldField& g, double p);

double lp_norm_M(const ManifoldField& f, double p);

/// sqrt(det(T^T T)) from a column-pivoted QR; 0 when rank < n.
double gram_jacobian(const LinearMapMatrix& t);

/// Sum of f dV in cell order against shell-by-shell sums times dr. Only the
/// radial level function "r" is supported.
CheckResult coarea_M_check(const ManifoldField& f, const std::string& level_function = "r");

/// A is a union of full radial shells (shells[i] != 0). Judged only when phi
/// is non-decreasing.
CheckResult check_isoperimetric_M(const WeightedRadialGrid& g, const std::vector<std::uint8_t>& shells);

/// Weighted radial gradient norm before and after rearrangement; f is taken
/// as 0 beyond r_max. Judged at 2% only when phi is non-decreasing.
CheckResult check_polya_szego_M(const ManifoldField& f, double p);
double radial_gradient_norm(const WeightedRadialGrid& g, const std::vector<double>& profile, double p);

}  // namespace symmcal::manifold
