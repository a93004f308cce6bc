#pragma once

#include <functional>
#include <vector>

#include "deform/potential.hpp"

namespace deform {

enum class Region { Void, Band, Saturated };

/// Piecewise-constant density on the cells of a uniform grid.
struct EquilibriumDensity {
  double x_minus = 0.0;
  double x_plus = 0.0;
  std::vector<double> edges;    // cell edges, uniform
  std::vector<double> centers;  // cell midpoints
  std::vector<double> density;  // value on each cell
  double mass = 0.0;
  double energy = 0.0;
  double residual = 0.0;  // duality gap of the discrete problem
  int iterations = 0;
  bool analytic = false;
  std::vector<Region> regions;  // constrained problems only

  double operator()(double x) const;
};

struct EquilibriumOptions {
  int max_iterations = 100000;
  double gap_tolerance = 1e-7;
  bool prefer_analytic = true;
};

/// `cells` equal cells covering a bracket of the support of the equilibrium
/// measure of V (the region where V - min V < 6, widened to the analytic
/// support when known).
std::vector<double> default_equilibrium_grid(const Potential& V, int cells = 2000);

/// Minimizes sum_ij mu_i mu_j L_ij + sum_i mu_i field_i over
/// { 0 <= mu_i <= cap_i, sum mu_i = 1 } where L_ij is the exact cell average
/// of log 1/|x - y| and field_i the cell average of `field`. An empty `cap`
/// means no upper bound. Accelerated projected gradient with restarts.
EquilibriumDensity solve_log_energy(const std::function<double(double)>& field,
                                    const std::vector<double>& edges,
                                    const std::vector<double>& cap,
                                    const EquilibriumOptions& opts = {});

/// Equilibrium measure of the log energy with external field V on the
/// cells given by `grid` (edges). Returns the analytic density, sampled on
/// the grid, when V carries one and `opts.prefer_analytic` is set.
EquilibriumDensity equilibrium_density(const Potential& V, const std::vector<double>& grid,
                                       const EquilibriumOptions& opts = {});

}  // namespace deform
