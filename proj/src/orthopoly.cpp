#include "deform/orthopoly.hpp"

#include <algorithm>
#include <cmath>

#include "deform/errors.hpp"
#include "deform/parallel_kernels.hpp"

namespace deform {

namespace {

constexpr double kRescaleAbove = 1e100;

// Unweighted recurrence values p~_k (orthonormal w.r.t. exp(-n(V - v_min)))
// with a running power-of-e scale: true p~_k = p[k] * exp(log_scale).
struct ScaledValues {
  std::vector<double> p;
  std::vector<double> dp;  // derivatives, same scale; filled on request
  double log_scale = 0.0;
};

ScaledValues recurrence(const BiorthogonalSystem& s, double x, int count,
                        bool derivative) {
  ScaledValues out;
  out.p.assign(count, 0.0);
  if (derivative) out.dp.assign(count, 0.0);
  out.p[0] = 1.0 / std::sqrt(s.mu0);
  if (count == 1) return out;
  out.p[1] = (x - s.a[0]) * out.p[0] / s.b[1];
  if (derivative) out.dp[1] = out.p[0] / s.b[1];
  for (int k = 1; k + 1 < count; ++k) {
    out.p[k + 1] = ((x - s.a[k]) * out.p[k] - s.b[k] * out.p[k - 1]) / s.b[k + 1];
    if (derivative)
      out.dp[k + 1] =
          ((x - s.a[k]) * out.dp[k] + out.p[k] - s.b[k] * out.dp[k - 1]) / s.b[k + 1];
    const double mag = std::abs(out.p[k + 1]) + (derivative ? std::abs(out.dp[k + 1]) : 0.0);
    if (mag > kRescaleAbove) {
      for (int j = 0; j <= k + 1; ++j) out.p[j] /= kRescaleAbove;
      if (derivative)
        for (int j = 0; j <= k + 1; ++j) out.dp[j] /= kRescaleAbove;
      out.log_scale += std::log(kRescaleAbove);
    }
  }
  return out;
}

double half_log_weight(const BiorthogonalSystem& s, double x) {
  return -0.5 * s.n * (s.potential(x) - s.v_min);
}

QuadratureRule rule_on(double lo, double hi, int per_unit, double max_panel) {
  const int order = std::max(8, static_cast<int>(std::ceil(per_unit * max_panel)));
  return composite_gauss_legendre({lo, hi}, order, max_panel);
}

}  // namespace

double BiorthogonalSystem::scaled_weight(double x) const {
  return std::exp(-n * (potential(x) - v_min));
}

void BiorthogonalSystem::psi(double x, double* out, int count) const {
  if (count > n + 1) throw ParameterError("psi: count exceeds n + 1");
  const ScaledValues v = recurrence(*this, x, count, false);
  const double f = std::exp(v.log_scale + half_log_weight(*this, x));
  for (int k = 0; k < count; ++k) out[k] = v.p[k] * f;
}

std::vector<double> BiorthogonalSystem::psi(double x) const {
  std::vector<double> out(n);
  psi(x, out.data(), n);
  return out;
}

Eigen::MatrixXd BiorthogonalSystem::psi_matrix(const std::vector<double>& x,
                                               double scale) const {
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd out(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j) {
    psi(x[j], out.col(j).data(), n);
    out.col(j) *= scale;
  }
  return out;
}

QuadratureRule weight_quadrature(const Potential& V, int n, int per_unit) {
  if (n < 1) throw ParameterError("weight_quadrature: n must be >= 1");
  const double x0 = V.argmin();
  const double v0 = V(x0);
  const double rise = std::max(40.0 / n, 2.0);
  auto march = [&](double dir) {
    double x = x0;
    for (int i = 0; i < 100000; ++i) {
      x += dir * 0.02 * (1.0 + std::abs(x));
      if (V(x) - v0 >= rise) return x;
    }
    throw ParameterError("weight_quadrature: potential does not confine");
  };
  double lo = march(-1.0);
  double hi = march(1.0);
  if (V.analytic) {
    lo = std::min(lo, V.analytic->x_minus - 0.25);
    hi = std::max(hi, V.analytic->x_plus + 0.25);
  }
  return rule_on(lo, hi, per_unit, 0.5);
}

BiorthogonalSystem stieltjes_recurrence(const Potential& V, int n,
                                        const QuadratureRule& quad) {
  if (n < 1) throw ParameterError("stieltjes_recurrence: n must be >= 1");
  const std::size_t m = quad.size();
  if (m <= static_cast<std::size_t>(n))
    throw RefinementError("stieltjes_recurrence: quadrature has too few nodes");

  BiorthogonalSystem s;
  s.n = n;
  s.potential = V;
  s.support_lo = quad.a;
  s.support_hi = quad.b;
  s.v_min = V(quad.nodes[0]);
  std::vector<double> vx(m);
  for (std::size_t i = 0; i < m; ++i) {
    vx[i] = V(quad.nodes[i]);
    s.v_min = std::min(s.v_min, vx[i]);
  }
  Eigen::VectorXd x(m), lam(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = quad.nodes[i];
    lam[i] = quad.weights[i] * std::exp(-n * (vx[i] - s.v_min));
  }
  s.mu0 = lam.sum();

  // Lanczos on diag(x) against the measure sum lam_i delta_{x_i}.
  Eigen::MatrixXd Q(m, n + 1);
  Q.col(0) = lam.cwiseSqrt() / std::sqrt(s.mu0);
  s.a.assign(n, 0.0);
  s.b.assign(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd w = x.cwiseProduct(Q.col(k));
    if (k > 0) w -= s.b[k] * Q.col(k - 1);
    s.a[k] = Q.col(k).dot(w);
    w -= s.a[k] * Q.col(k);
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
    s.b[k + 1] = w.norm();
    if (!(s.b[k + 1] > 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())))
      throw RefinementError("stieltjes_recurrence: Lanczos breakdown at k=" +
                            std::to_string(k) + "; refine the quadrature");
    Q.col(k + 1) = w / s.b[k + 1];
  }

  // Independent check on a rule with different panels and order.
  const int check_per_unit =
      static_cast<int>(std::ceil(1.5 * quad.size() / (quad.b - quad.a))) + 7;
  const QuadratureRule check = rule_on(quad.a, quad.b, check_per_unit, 0.37);
  s.orthonormality_residual = orthonormality_residual(s, check);
  if (s.orthonormality_residual > 1e-6)
    throw RefinementError("stieltjes_recurrence: orthonormality defect " +
                          std::to_string(s.orthonormality_residual) +
                          "; raise the quadrature order");
  return s;
}

BiorthogonalSystem stieltjes_recurrence(const Potential& V, int n, int per_unit) {
  QuadratureRule quad = weight_quadrature(V, n, per_unit);
  double lo = quad.a, hi = quad.b;
  for (int iter = 0; iter < 30; ++iter) {
    BiorthogonalSystem s = stieltjes_recurrence(V, n, quad);
    // The kernel diagonal must be negligible at both ends of the support.
    double peak = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = lo + (hi - lo) * i / 200.0;
      peak = std::max(peak, cd_kernel_sum(s, x, x));
    }
    const bool left_ok = cd_kernel_sum(s, lo, lo) < 1e-16 * peak;
    const bool right_ok = cd_kernel_sum(s, hi, hi) < 1e-16 * peak;
    if (left_ok && right_ok) return s;
    const double grow = 0.25 * (hi - lo);
    if (!left_ok) lo -= grow;
    if (!right_ok) hi += grow;
    quad = rule_on(lo, hi, per_unit, 0.5);
  }
  throw RefinementError("stieltjes_recurrence: support truncation did not settle");
}

double cd_kernel_sum(const BiorthogonalSystem& sys, double x, double y) {
  std::vector<double> px(sys.n), py(sys.n);
  sys.psi(x, px.data(), sys.n);
  sys.psi(y, py.data(), sys.n);
  double s = 0.0;
  for (int k = 0; k < sys.n; ++k) s += px[k] * py[k];
  return s;
}

double cd_kernel(const BiorthogonalSystem& sys, double x, double y) {
  const int n = sys.n;
  if (std::abs(x - y) >= 1e-6 * (1.0 + std::abs(x))) {
    std::vector<double> px(n + 1), py(n + 1);
    sys.psi(x, px.data(), n + 1);
    sys.psi(y, py.data(), n + 1);
    return sys.b[n] * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y);
  }
  const double mid = 0.5 * (x + y);
  const ScaledValues v = recurrence(sys, mid, n + 1, true);
  const double core = sys.b[n] * (v.dp[n] * v.p[n - 1] - v.dp[n - 1] * v.p[n]);
  return core * std::exp(2.0 * v.log_scale + half_log_weight(sys, x) +
                         half_log_weight(sys, y));
}

double orthonormality_residual(const BiorthogonalSystem& sys, const QuadratureRule& quad) {
  const Eigen::MatrixXd P = sys.psi_matrix(quad.nodes);
  Eigen::VectorXd w(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) w[i] = quad.weights[i];
  const Eigen::MatrixXd G = P * w.asDiagonal() * P.transpose();
  return (G - Eigen::MatrixXd::Identity(sys.n, sys.n)).cwiseAbs().maxCoeff();
}

namespace {

KernelField rescaled(const BiorthogonalSystem& sys, double center, double factor,
                     double gamma, double c, const std::string& name) {
  KernelField k;
  k.name = name;
  k.rank = sys.n;
  k.symmetric = true;
  const BiorthogonalSystem s = sys;
  k.eval = [s, center, factor](double u, double v) {
    return cd_kernel(s, center + u / factor, center + v / factor) / factor;
  };
  k.left_features = [s, center, factor](const std::vector<double>& u) {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = center + u[i] / factor;
    return s.psi_matrix(x, 1.0 / std::sqrt(factor));
  };
  k.measure = ReferenceMeasure::lebesgue((sys.support_lo - center) * factor,
                                         (sys.support_hi - center) * factor);
  k.measure.scale = ScaleMap{center, c, gamma, static_cast<double>(sys.n)};
  return k;
}

}  // namespace

KernelField rescaled_bulk_kernel(const BiorthogonalSystem& sys, double x_star,
                                 double kappa_star) {
  if (!(kappa_star > 0.0))
    throw ParameterError("rescaled_bulk_kernel: kappa* <= 0, x* is not a bulk point");
  return rescaled(sys, x_star, kappa_star * sys.n, 1.0, kappa_star, "bulk-cd");
}

KernelField rescaled_edge_kernel(const BiorthogonalSystem& sys, double x_plus, double c) {
  if (!(c > 0.0)) throw ParameterError("rescaled_edge_kernel: c must be > 0");
  return rescaled(sys, x_plus, c * std::pow(sys.n, 2.0 / 3.0), 2.0 / 3.0, c, "edge-cd");
}

}  // namespace deform
