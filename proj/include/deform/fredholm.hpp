#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "deform/kernel_field.hpp"

namespace deform {

/// Nystrom matrix A_ij = sqrt(w_i) K(u_i, u_j) sqrt(w_j) on a grid.
struct DiscretizedOperator {
  std::string name;
  std::vector<double> nodes;
  std::vector<double> weights;  // 1 for counting measures
  Eigen::MatrixXd A;
  Eigen::MatrixXd features;  // rank x m with A = F^T F, when known
  bool exact = false;        // counting measure: no quadrature error

  std::size_t size() const noexcept { return nodes.size(); }
  /// f at every node.
  std::vector<double> sample(const std::function<double(double)>& f) const;
};

/// Discretizes K on [lo, hi] (clipped to the kernel's measure) with a
/// composite Gauss-Legendre rule of `order` nodes per panel; panels break at
/// `breakpoints` and are at most `max_panel` long. For counting measures the
/// nodes in [lo, hi] are used with unit weights. Throws DegeneracyError on
/// an empty window.
DiscretizedOperator discretize(const KernelField& K, double lo, double hi, int order,
                               std::vector<double> breakpoints = {}, double max_panel = 1.0);

/// det(I - sqrt(psi) A sqrt(psi)) by pivoted LU (through the n x n
/// Sylvester form when a low-rank factorization is known).
double fredholm_det(const DiscretizedOperator& op, const std::vector<double>& psi);

struct SeriesResult {
  std::vector<double> S;      // S_0 .. S_kmax
  double partial = 0.0;       // sum_k (-1)^k S_k / k!
  double tail_bound = 0.0;    // sum_{k > kmax} k^{k/2} (|Phi| |Psi|)^k / k!
  double dominator = 0.0;     // |Phi|_2 |Psi|_2 used for the bound
};

/// S_k = int det[psi(u_i) K(u_i, u_j)] d mu^k on the tensor grid, k <= k_max,
/// evaluated as k! times the sum of k x k principal minors. `dominator` is
/// |Phi|_2 |Psi|_2 for |psi K(u,v)| <= Phi(u) Psi(v); a negative value selects
/// Phi = Psi = sqrt(psi K(u,u)), valid for positive semidefinite kernels.
/// Throws CostGuardError for k_max > 8 or more than 5e7 minors per order.
SeriesResult fredholm_series(const DiscretizedOperator& op, const std::vector<double>& psi,
                             int k_max, double dominator = -1.0);

/// Matrix of K^sigma = sqrt(1-sigma) K (I - sigma K)^{-1} sqrt(1-sigma), by an LU
/// solve of (I - A diag(sigma)) X = A with one refinement step. Throws
/// ConditioningError when the reciprocal condition estimate is below 1e-12.
DiscretizedOperator deformed_kernel(const DiscretizedOperator& op,
                                    const std::vector<double>& sigma, double* rcond = nullptr);

enum class Route { Ratio, DeformedKernel, Series, MonteCarlo };
const char* route_name(Route r);

struct GeneratingFunctionalValue {
  double value = 1.0;
  Route route = Route::Ratio;
  double g_sigma = 1.0;           // det(I - sigma K)
  double truncation_bound = 0.0;  // series route only
  double condition = 1.0;         // reciprocal condition estimate, kernel route
};

/// G^sigma[h] = det(I - (sigma + h - sigma h) K) / det(I - sigma K) (ratio)
/// or det(I - sqrt(h) K^sigma sqrt(h)) (deformed kernel, or its series with
/// k_max = 6). Throws ConditioningError when det(I - sigma K) <= 0.
GeneratingFunctionalValue pgf_deformed(const DiscretizedOperator& op,
                                       const std::vector<double>& sigma,
                                       const std::vector<double>& h, Route route);

/// sigma + h - sigma h, evaluated as one fused operation per node.
std::vector<double> combine_symbols(const std::vector<double>& sigma,
                                    const std::vector<double>& h);

}  // namespace deform
