#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "deform/quadrature.hpp"

namespace deform {

/// A two-point kernel K(u, v) together with the measure it acts against.
///
/// `eval` is always present. `batch` (if set) evaluates the kernel on all
/// pairs of a node list at once. `left_features`/`right_features` (if set)
/// give a finite-rank factorization K(u, v) = sum_k L_k(u) R_k(v); each
/// returns a rank x m matrix on the given nodes.
struct KernelField {
  using Batch = std::function<Eigen::MatrixXd(const std::vector<double>&)>;

  std::string name;
  std::function<double(double, double)> eval;
  ReferenceMeasure measure = ReferenceMeasure::lebesgue(-1.0, 1.0);
  Batch batch;
  Batch left_features;
  Batch right_features;
  int rank = -1;  // >= 0 for finite-rank kernels
  bool symmetric = true;

  double operator()(double u, double v) const { return eval(u, v); }
  bool finite_rank() const { return static_cast<bool>(left_features); }

  /// K(u_i, u_j) for all pairs (no quadrature weights).
  Eigen::MatrixXd matrix(const std::vector<double>& nodes) const;
};

KernelField sine_kernel_field(double lo = -1e300, double hi = 1e300);
KernelField airy_kernel_field(double lo = -1e300, double hi = 1e300);

/// Discrete sine kernel on a lattice; the measure is counting measure on it.
KernelField discrete_sine_kernel_field(double beta, double kappa, double rho_star,
                                       std::vector<double> lattice);

}  // namespace deform
