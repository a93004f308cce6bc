#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "deform/equilibrium.hpp"
#include "deform/kernel_field.hpp"

namespace deform {

/// Positive density on [0, 1] with unit mass; defines the lattice nodes.
struct NodeDensity {
  std::string name;
  std::function<double(double)> rho;
  double m = 1.0;  // min on [0,1]
  double M = 1.0;  // max on [0,1]

  static NodeDensity uniform();
  /// Checks positivity and unit mass (1e-10); bounds m, M by sampling.
  static NodeDensity from_function(std::function<double(double)> rho, std::string name);

  double operator()(double x) const { return rho(x); }
  /// int_0^x rho.
  double cdf(double x) const;
};

/// Solutions of int_0^{x_j} rho = (2j+1)/(2N), j = 0..N-1.
std::vector<double> quantized_nodes(const NodeDensity& rho, int N);

/// U^rho(x) = int_0^1 log(1/|x - t|) rho(t) dt.
double log_potential(const NodeDensity& rho, double x);

/// log w_N(x_j) = -N (V - U^rho + eta/N) at the given nodes.
std::vector<double> coulomb_log_weight(const std::function<double(double)>& V,
                                       const NodeDensity& rho,
                                       const std::function<double(double)>& eta,
                                       const std::vector<double>& nodes);

/// exp of coulomb_log_weight (may underflow for large N).
std::vector<double> coulomb_weight(const std::function<double(double)>& V,
                                   const NodeDensity& rho,
                                   const std::function<double(double)>& eta, int N);

/// Discrete orthonormal polynomials on a node set, carried as
/// psi_k(x_j) = sqrt(w_N(x_j)) p_k(x_j) (column k of `psi`).
struct DiscreteEnsemble {
  int N = 0;
  int n = 0;
  double beta = 0.0;
  std::vector<double> nodes;
  std::vector<double> log_weight;
  std::vector<double> a, b;  // recurrence coefficients (b[0] = 0)
  Eigen::MatrixXd psi;       // N x n
  double orthonormality_residual = 0.0;

  /// k_n(x_i, x_j) by node index.
  double kernel(int i, int j) const { return psi.row(i).dot(psi.row(j)); }
};

/// Lanczos with full reorthogonalization on the node set with log-weights
/// (normalized by their max before exponentiation). Throws DegeneracyError
/// when fewer than n orthonormal directions survive.
DiscreteEnsemble discrete_orthonormal(const std::vector<double>& nodes,
                                      const std::vector<double>& log_weight, int n);

/// Omega_N = (kappa n / beta)(Lambda_N - x*), recentred so that the smallest
/// non-negative site sits at 0.
struct ScaledLattice {
  std::vector<double> sites;  // recentred q_j, increasing
  std::vector<double> raw;    // before recentring
  int zero_index = 0;         // node index of q_0
  double x_star = 0.0;
  double kappa = 0.0;
  double factor = 0.0;        // kappa n / beta
  double limit_spacing = 0.0; // kappa / rho(x*)
  double shift = 0.0;         // q_0 before recentring
};

ScaledLattice scale_lattice(const DiscreteEnsemble& ens, const NodeDensity& rho,
                            double x_star, double kappa_star);

/// K_n(u, v) = k_n(x(u), x(v)) on Omega_N (zero off the lattice), with the
/// counting measure on Omega_N.
KernelField scaled_discrete_kernel(const DiscreteEnsemble& ens, const NodeDensity& rho,
                                   double x_star, double kappa_star);

/// Krawtchouk-type field V(x) = -x log(p / (1 - p)).
std::function<double(double)> krawtchouk_potential(double p);

/// Hahn-type field V(x) = -(a+x)log(a+x) - (b-x)log(b-x) + c x + d.
std::function<double(double)> hahn_potential(double a, double b, double c, double d);

/// Constrained equilibrium density for the Krawtchouk-type field with
/// rho = 1, in closed form.
double krawtchouk_density(double x, double p, double beta);

/// Minimizer of the log energy with field (V - U^rho)/beta under
/// 0 <= density <= rho/beta on the cells of `grid` (edges inside [0,1]).
/// Each cell is classified as void, band or saturated.
EquilibriumDensity constrained_equilibrium(const std::function<double(double)>& V,
                                           const NodeDensity& rho, double beta,
                                           const std::vector<double>& grid,
                                           const EquilibriumOptions& opts = {});

}  // namespace deform
