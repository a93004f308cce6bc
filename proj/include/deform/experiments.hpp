#pragma once

#include <functional>
#include <string>
#include <utility>

#include "deform/config.hpp"
#include "deform/discrete_gas.hpp"
#include "deform/potential.hpp"
#include "deform/report.hpp"

namespace deform {

/// Bulk point x* and kappa_V(x*) (config overrides, then the analytic
/// density, then the numerical equilibrium). Throws AssumptionError when
/// kappa <= 0.
std::pair<double, double> bulk_point(const Potential& V, const ExperimentConfig& cfg);

/// Right soft edge x+ and scale c = (pi C)^{2/3}; for potentials without a
/// closed form, C is fitted to density^2 ~ C^2 (x+ - x) near the edge.
std::pair<double, double> soft_edge(const Potential& V);

/// Lattice field from "krawtchouk:p", "hahn:a,b,c,d" or "custom:<expr>".
std::function<double(double)> lattice_potential(const std::string& spec);
/// "uniform" or "custom:<expr>".
NodeDensity node_density_from_spec(const std::string& spec);

ConvergenceReport run_bulk_sine(const ExperimentConfig& cfg);
ConvergenceReport run_edge_airy(const ExperimentConfig& cfg);
ConvergenceReport run_discrete_sine(const ExperimentConfig& cfg);
ConvergenceReport run_mc_verify(const ExperimentConfig& cfg);
ConvergenceReport run_gap(const ExperimentConfig& cfg);
ConvergenceReport run_equilibrium(const ExperimentConfig& cfg);

/// Validates cfg, dispatches on cfg.scenario and fills the common metadata
/// (config text and hash, version, wall time).
ConvergenceReport run_scenario(const ExperimentConfig& cfg);

/// 0, or 3 when a Monte Carlo z-score exceeds 3.
int exit_code(const ConvergenceReport& report);

}  // namespace deform
