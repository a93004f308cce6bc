#pragma once

#include <vector>

#include "deform/kernel_field.hpp"
#include "deform/potential.hpp"
#include "deform/quadrature.hpp"

namespace deform {

/// Orthonormal polynomials for w_n = exp(-n V) on R, stored by their
/// three-term recurrence
///   x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}.
/// Evaluation goes through psi_k = sqrt(w_n) p_k, which stays O(1) where
/// p_k or w_n alone would overflow or underflow.
class BiorthogonalSystem {
 public:
  int n = 0;
  Potential potential;
  std::vector<double> a;  // a_0 .. a_{n-1}
  std::vector<double> b;  // b_0 = 0, b_1 .. b_n
  double v_min = 0.0;     // weights are carried relative to exp(-n v_min)
  double mu0 = 0.0;       // integral of exp(-n (V - v_min))
  double support_lo = 0.0;
  double support_hi = 0.0;
  double orthonormality_residual = 0.0;  // on an independent quadrature

  /// w_n(x) exp(n v_min).
  double scaled_weight(double x) const;

  /// psi_0(x) .. psi_{count-1}(x), count <= n + 1.
  void psi(double x, double* out, int count) const;
  std::vector<double> psi(double x) const;

  /// Rows k < n, one column per node: psi_k(x_j) * scale.
  Eigen::MatrixXd psi_matrix(const std::vector<double>& x, double scale = 1.0) const;
};

/// Quadrature for e^{-nV} on a truncated support: composite Gauss-Legendre
/// with `per_unit` nodes per unit length.
QuadratureRule weight_quadrature(const Potential& V, int n, int per_unit = 200);

/// Discretized Stieltjes procedure (Lanczos with full reorthogonalization on
/// the discrete measure). Throws RefinementError if an independent finer
/// quadrature sees an orthonormality defect above 1e-6.
BiorthogonalSystem stieltjes_recurrence(const Potential& V, int n,
                                        const QuadratureRule& quad);

/// Convenience: choose the support and quadrature automatically.
BiorthogonalSystem stieltjes_recurrence(const Potential& V, int n, int per_unit = 200);

/// Christoffel-Darboux kernel k_n(x, y) = sum_{k<n} psi_k(x) psi_k(y),
/// evaluated by the two-term Christoffel-Darboux formula; derivative form
/// near the diagonal.
double cd_kernel(const BiorthogonalSystem& sys, double x, double y);

/// Same kernel by direct summation (reference for the formula above).
double cd_kernel_sum(const BiorthogonalSystem& sys, double x, double y);

/// max_{j,k<n} |sum_i w_i psi_j psi_k - delta_jk| on the given rule.
double orthonormality_residual(const BiorthogonalSystem& sys, const QuadratureRule& quad);

/// K_n(u,v) = k_n(x* + u/(kappa n), x* + v/(kappa n)) / (kappa n).
KernelField rescaled_bulk_kernel(const BiorthogonalSystem& sys, double x_star,
                                 double kappa_star);

/// K_n(u,v) = k_n(x+ + u/(c n^{2/3}), ...) / (c n^{2/3}).
KernelField rescaled_edge_kernel(const BiorthogonalSystem& sys, double x_plus, double c);

}  // namespace deform
