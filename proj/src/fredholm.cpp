#include "deform/fredholm.hpp"

#include <algorithm>
#include <cmath>

#include "deform/errors.hpp"
#include "deform/quadrature.hpp"

namespace deform {

namespace {

void check_size(const DiscretizedOperator& op, const std::vector<double>& v, const char* what) {
  if (v.size() != op.size())
    throw ParameterError(std::string(what) + ": values do not match the grid size");
}

// Determinant of a k x k matrix held row-major in `a` (destroyed).
double small_det(double* a, int k) {
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int p = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(a[r * k + c]) > std::abs(a[p * k + c])) p = r;
    if (a[p * k + c] == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
      det = -det;
    }
    const double piv = a[c * k + c];
    det *= piv;
    for (int r = c + 1; r < k; ++r) {
      const double f = a[r * k + c] / piv;
      for (int j = c + 1; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
    }
  }
  return det;
}

double binomial(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

// Sum of the k x k principal minors of M whose smallest index is `first`.
double minors_from(const Eigen::MatrixXd& M, int k, int first) {
  const int m = static_cast<int>(M.rows());
  int idx[8];
  double buf[64];
  idx[0] = first;
  double total = 0.0;
  if (k == 1) return M(first, first);
  int depth = 1;
  idx[1] = first;
  while (depth >= 1) {
    ++idx[depth];
    if (idx[depth] > m - (k - depth)) {
      --depth;
      continue;
    }
    if (depth + 1 < k) {
      idx[depth + 1] = idx[depth];
      ++depth;
      continue;
    }
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) buf[r * k + c] = M(idx[r], idx[c]);
    total += small_det(buf, k);
  }
  return total;
}

}  // namespace

std::vector<double> DiscretizedOperator::sample(const std::function<double(double)>& f) const {
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = f(nodes[i]);
  return out;
}

DiscretizedOperator discretize(const KernelField& K, double lo, double hi, int order,
                               std::vector<double> breakpoints, double max_panel) {
  DiscretizedOperator op;
  op.name = K.name;
  if (K.measure.is_counting()) {
    for (double q : K.measure.counting_nodes().nodes)
      if (q >= lo && q <= hi) op.nodes.push_back(q);
    op.weights.assign(op.nodes.size(), 1.0);
    op.exact = true;
  } else {
    const ContinuousDensity& d = K.measure.density();
    lo = std::max(lo, d.lo);
    hi = std::min(hi, d.hi);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw DegeneracyError("discretize: empty or unbounded window");
    if (order < 1) throw ParameterError("discretize: order must be >= 1");
    std::vector<double> br{lo, hi};
    for (double b : breakpoints)
      if (b > lo && b < hi) br.push_back(b);
    const QuadratureRule rule = composite_gauss_legendre(br, order, max_panel);
    op.nodes = rule.nodes;
    op.weights = rule.weights;
    for (std::size_t i = 0; i < op.size(); ++i) op.weights[i] *= d.density(op.nodes[i]);
  }
  if (op.nodes.empty()) throw DegeneracyError("discretize: no nodes in the window");

  const Eigen::Index m = static_cast<Eigen::Index>(op.size());
  Eigen::VectorXd sw(m);
  for (Eigen::Index i = 0; i < m; ++i) sw[i] = std::sqrt(op.weights[i]);
  if (K.finite_rank() && !K.right_features) {
    op.features = K.left_features(op.nodes) * sw.asDiagonal();
    op.A = op.features.transpose() * op.features;
  } else {
    op.A = sw.asDiagonal() * K.matrix(op.nodes) * sw.asDiagonal();
  }
  return op;
}

double fredholm_det(const DiscretizedOperator& op, const std::vector<double>& psi) {
  check_size(op, psi, "fredholm_det");
  const Eigen::Index m = static_cast<Eigen::Index>(op.size());
  Eigen::VectorXd d(m);
  bool all_zero = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    d[i] = std::sqrt(std::max(psi[i], 0.0));
    all_zero = all_zero && psi[i] == 0.0;
  }
  if (all_zero) return 1.0;
  if (op.features.rows() > 0 && op.features.rows() < m) {
    const Eigen::MatrixXd G = op.features * d.asDiagonal();
    const Eigen::MatrixXd S =
        Eigen::MatrixXd::Identity(G.rows(), G.rows()) - G * G.transpose();
    return S.partialPivLu().determinant();
  }
  const Eigen::MatrixXd M =
      Eigen::MatrixXd::Identity(m, m) - d.asDiagonal() * op.A * d.asDiagonal();
  return M.partialPivLu().determinant();
}

SeriesResult fredholm_series(const DiscretizedOperator& op, const std::vector<double>& psi,
                             int k_max, double dominator) {
  check_size(op, psi, "fredholm_series");
  if (k_max < 0 || k_max > 8) throw CostGuardError("fredholm_series: k_max must lie in [0, 8]");
  const int m = static_cast<int>(op.size());
  for (int k = 1; k <= k_max; ++k)
    if (binomial(m, k) > 5e7)
      throw CostGuardError("fredholm_series: " + std::to_string(m) + " nodes at order " +
                           std::to_string(k) + " exceeds the cost guard");
  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) d[i] = std::sqrt(std::max(psi[i], 0.0));
  const Eigen::MatrixXd M = d.asDiagonal() * op.A * d.asDiagonal();

  SeriesResult out;
  out.S.assign(k_max + 1, 0.0);
  out.S[0] = 1.0;
  double factorial = 1.0;
  out.partial = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    factorial *= k;
    std::vector<double> part(m, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int first = 0; first <= m - k; ++first) part[first] = minors_from(M, k, first);
    double e = 0.0;
    for (double v : part) e += v;
    out.S[k] = factorial * e;
    out.partial += (k % 2 ? -1.0 : 1.0) * e;
  }

  if (dominator < 0.0) {
    dominator = 0.0;
    for (int i = 0; i < m; ++i) dominator += std::max(psi[i], 0.0) * std::abs(op.A(i, i));
  }
  out.dominator = dominator;
  if (dominator > 0.0) {
    const double ld = std::log(dominator);
    for (int k = k_max + 1; k < 2000; ++k) {
      const double term =
          std::exp(0.5 * k * std::log(static_cast<double>(k)) + k * ld - std::lgamma(k + 1.0));
      out.tail_bound += term;
      if (k > 3 && term < 1e-18 * out.tail_bound) break;
    }
  }
  return out;
}

DiscretizedOperator deformed_kernel(const DiscretizedOperator& op,
                                    const std::vector<double>& sigma, double* rcond) {
  check_size(op, sigma, "deformed_kernel");
  const Eigen::Index m = static_cast<Eigen::Index>(op.size());
  Eigen::VectorXd s(m), r(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    s[i] = sigma[i];
    r[i] = std::sqrt(std::max(1.0 - sigma[i], 0.0));
  }
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(m, m) - op.A * s.asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const double rc = lu.rcond();
  if (rcond) *rcond = rc;
  if (!(rc >= 1e-12))
    throw ConditioningError("deformed_kernel: I - sigma K is numerically singular (rcond " +
                            std::to_string(rc) + ")");
  Eigen::MatrixXd X = lu.solve(op.A);
  X += lu.solve(op.A - M * X);

  DiscretizedOperator out;
  out.name = op.name + "^sigma";
  out.nodes = op.nodes;
  out.weights = op.weights;
  out.exact = op.exact;
  out.A = r.asDiagonal() * X * r.asDiagonal();
  out.A = 0.5 * (out.A + out.A.transpose()).eval();
  return out;
}

const char* route_name(Route r) {
  switch (r) {
    case Route::Ratio:
      return "ratio";
    case Route::DeformedKernel:
      return "deformed-kernel";
    case Route::Series:
      return "series";
    case Route::MonteCarlo:
      return "monte-carlo";
  }
  return "?";
}

std::vector<double> combine_symbols(const std::vector<double>& sigma,
                                    const std::vector<double>& h) {
  if (sigma.size() != h.size()) throw ParameterError("combine_symbols: size mismatch");
  std::vector<double> out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = std::fma(h[i], 1.0 - sigma[i], sigma[i]);
  return out;
}

GeneratingFunctionalValue pgf_deformed(const DiscretizedOperator& op,
                                       const std::vector<double>& sigma,
                                       const std::vector<double>& h, Route route) {
  check_size(op, sigma, "pgf_deformed");
  check_size(op, h, "pgf_deformed");
  GeneratingFunctionalValue out;
  out.route = route;
  out.g_sigma = fredholm_det(op, sigma);
  if (!(out.g_sigma > 0.0))
    throw ConditioningError("pgf_deformed: det(I - sigma K) = " + std::to_string(out.g_sigma) +
                            " <= 0, the deformation is ill-posed");
  switch (route) {
    case Route::Ratio: {
      Eigen::VectorXd r(static_cast<Eigen::Index>(op.size()));
      for (std::size_t i = 0; i < op.size(); ++i) r[i] = std::sqrt(std::max(sigma[i], 0.0));
      const Eigen::MatrixXd M =
          Eigen::MatrixXd::Identity(r.size(), r.size()) - r.asDiagonal() * op.A * r.asDiagonal();
      out.condition = Eigen::PartialPivLU<Eigen::MatrixXd>(M).rcond();
      if (!(out.condition >= 1e-12))
        throw ConditioningError("pgf_deformed: I - sigma K is numerically singular");
      out.value = fredholm_det(op, combine_symbols(sigma, h)) / out.g_sigma;
      break;
    }
    case Route::DeformedKernel:
      out.value = fredholm_det(deformed_kernel(op, sigma, &out.condition), h);
      break;
    case Route::Series: {
      const SeriesResult s = fredholm_series(deformed_kernel(op, sigma, &out.condition), h, 6);
      out.value = s.partial;
      out.truncation_bound = s.tail_bound;
      break;
    }
    case Route::MonteCarlo:
      throw ParameterError("pgf_deformed: the Monte Carlo route lives in the sampler");
  }
  return out;
}

}  // namespace deform
