#include "deform/discrete_gas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deform/errors.hpp"
#include "deform/quadrature.hpp"

namespace deform {

namespace {

const QuadratureRule& unit_rule(int order) {
  static const QuadratureRule r30 = gauss_legendre(30, 0.0, 1.0);
  static const QuadratureRule r60 = gauss_legendre(60, 0.0, 1.0);
  return order <= 30 ? r30 : r60;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

NodeDensity NodeDensity::uniform() {
  NodeDensity d;
  d.name = "uniform";
  d.rho = [](double) { return 1.0; };
  d.m = 1.0;
  d.M = 1.0;
  return d;
}

NodeDensity NodeDensity::from_function(std::function<double(double)> rho, std::string name) {
  NodeDensity d;
  d.name = std::move(name);
  d.rho = std::move(rho);
  d.m = INFINITY;
  d.M = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double v = d.rho(i / 2000.0);
    if (!(v > 0.0) || !std::isfinite(v))
      throw ParameterError("NodeDensity: rho must be positive and finite on [0,1]");
    d.m = std::min(d.m, v);
    d.M = std::max(d.M, v);
  }
  const double mass = d.cdf(1.0);
  if (std::abs(mass - 1.0) > 1e-10)
    throw ParameterError("NodeDensity: rho must integrate to 1 on [0,1]");
  return d;
}

double NodeDensity::cdf(double x) const {
  if (name == "uniform") return x;
  if (x <= 0.0) return 0.0;
  const QuadratureRule& r = unit_rule(60);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * rho(x * r.nodes[i]);
  return s * x;
}

std::vector<double> quantized_nodes(const NodeDensity& rho, int N) {
  if (N < 1) throw ParameterError("quantized_nodes: N must be >= 1");
  std::vector<double> x(N);
  for (int j = 0; j < N; ++j) {
    const double target = (2.0 * j + 1.0) / (2.0 * N);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rho.cdf(mid) < target ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) r -= (rho.cdf(r) - target) / rho(r);
    if (!(r > 0.0 && r < 1.0) || std::abs(rho.cdf(r) - target) > 1e-12)
      throw Error("quantized_nodes: root not bracketed for j=" + std::to_string(j));
    x[j] = r;
  }
  return x;
}

double log_potential(const NodeDensity& rho, double x) {
  if (x < 0.0 || x > 1.0) {
    const QuadratureRule& r = unit_rule(60);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      s -= r.weights[i] * std::log(std::abs(x - r.nodes[i])) * rho(r.nodes[i]);
    return s;
  }
  // rho(x) times the closed form for rho = 1, plus a regular remainder
  // integrated after t = x -+ s^2 on each side.
  const double rx = rho(x);
  double u = rx * (1.0 - xlogx(x) - xlogx(1.0 - x));
  const QuadratureRule& r = unit_rule(30);
  for (int side = 0; side < 2; ++side) {
    const double len = side == 0 ? std::sqrt(x) : std::sqrt(1.0 - x);
    if (len == 0.0) continue;
    double s_int = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double s = len * r.nodes[i];
      const double t = side == 0 ? x - s * s : x + s * s;
      s_int += r.weights[i] * (-2.0 * std::log(s)) * (rho(t) - rx) * 2.0 * s;
    }
    u += s_int * len;
  }
  return u;
}

std::vector<double> coulomb_log_weight(const std::function<double(double)>& V,
                                       const NodeDensity& rho,
                                       const std::function<double(double)>& eta,
                                       const std::vector<double>& nodes) {
  const double N = static_cast<double>(nodes.size());
  std::vector<double> lw(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double v = V(nodes[j]);
    if (!std::isfinite(v))
      throw ParameterError("coulomb_weight: V not finite at node " + std::to_string(nodes[j]));
    lw[j] = -N * (v - log_potential(rho, nodes[j])) - (eta ? eta(nodes[j]) : 0.0);
  }
  return lw;
}

std::vector<double> coulomb_weight(const std::function<double(double)>& V,
                                   const NodeDensity& rho,
                                   const std::function<double(double)>& eta, int N) {
  std::vector<double> lw = coulomb_log_weight(V, rho, eta, quantized_nodes(rho, N));
  for (double& v : lw) v = std::exp(v);
  return lw;
}

DiscreteEnsemble discrete_orthonormal(const std::vector<double>& nodes,
                                      const std::vector<double>& log_weight, int n) {
  const Eigen::Index N = static_cast<Eigen::Index>(nodes.size());
  if (n < 1 || n > N) throw ParameterError("discrete_orthonormal: need 1 <= n <= N");
  if (log_weight.size() != nodes.size())
    throw ParameterError("discrete_orthonormal: weight/node size mismatch");
  const double top = *std::max_element(log_weight.begin(), log_weight.end());
  Eigen::VectorXd x(N), sw(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    x[j] = nodes[j];
    sw[j] = std::exp(0.5 * (log_weight[j] - top));
  }

  DiscreteEnsemble e;
  e.N = static_cast<int>(N);
  e.n = n;
  e.beta = static_cast<double>(n) / N;
  e.nodes = nodes;
  e.log_weight = log_weight;
  e.a.assign(n, 0.0);
  e.b.assign(n, 0.0);
  Eigen::MatrixXd Q(N, n);
  Q.col(0) = sw.normalized();
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd w = x.cwiseProduct(Q.col(k));
    if (k > 0) w -= e.b[k] * Q.col(k - 1);
    e.a[k] = Q.col(k).dot(w);
    if (k + 1 == n) break;
    w -= e.a[k] * Q.col(k);
    for (int pass = 0; pass < 2; ++pass)
      w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
    const double bk = w.norm();
    if (!(bk > 1e-13 * scale))
      throw DegeneracyError("discrete_orthonormal: numerical rank " + std::to_string(k + 1) +
                            " < n = " + std::to_string(n));
    e.b[k + 1] = bk;
    Q.col(k + 1) = w / bk;
  }
  e.psi = std::move(Q);
  e.orthonormality_residual =
      (e.psi.transpose() * e.psi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  return e;
}

ScaledLattice scale_lattice(const DiscreteEnsemble& ens, const NodeDensity& rho,
                            double x_star, double kappa_star) {
  if (!(kappa_star > 0.0) || !(kappa_star < rho(x_star) / ens.beta))
    throw ParameterError("scale_lattice: x* is not a bulk point (need 0 < kappa < rho/beta)");
  ScaledLattice L;
  L.x_star = x_star;
  L.kappa = kappa_star;
  L.factor = kappa_star * ens.n / ens.beta;
  L.limit_spacing = kappa_star / rho(x_star);
  L.raw.resize(ens.N);
  for (int j = 0; j < ens.N; ++j) L.raw[j] = L.factor * (ens.nodes[j] - x_star);
  const double tol = 1e-9 * L.limit_spacing;
  auto it = std::find_if(L.raw.begin(), L.raw.end(), [&](double q) { return q >= -tol; });
  if (it == L.raw.end()) throw ParameterError("scale_lattice: x* beyond the last node");
  L.zero_index = static_cast<int>(it - L.raw.begin());
  L.shift = std::max(0.0, L.raw[L.zero_index]);
  L.sites.resize(ens.N);
  for (int j = 0; j < ens.N; ++j) L.sites[j] = L.raw[j] - L.raw[L.zero_index];
  return L;
}

KernelField scaled_discrete_kernel(const DiscreteEnsemble& ens, const NodeDensity& rho,
                                   double x_star, double kappa_star) {
  const ScaledLattice L = scale_lattice(ens, rho, x_star, kappa_star);
  auto index_of = [sites = L.sites, h = L.limit_spacing](double u) {
    auto it = std::lower_bound(sites.begin(), sites.end(), u - 1e-9 * h);
    if (it == sites.end() || std::abs(*it - u) > 1e-9 * h) return -1;
    return static_cast<int>(it - sites.begin());
  };
  const Eigen::MatrixXd psi = ens.psi;
  KernelField k;
  k.name = "discrete-cd";
  k.rank = ens.n;
  k.symmetric = true;
  k.eval = [psi, index_of](double u, double v) {
    const int i = index_of(u), j = index_of(v);
    if (i < 0 || j < 0) return 0.0;
    return psi.row(i).dot(psi.row(j));
  };
  k.left_features = [psi, index_of](const std::vector<double>& u) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(psi.cols(), static_cast<Eigen::Index>(u.size()));
    for (std::size_t c = 0; c < u.size(); ++c) {
      const int i = index_of(u[c]);
      if (i >= 0) f.col(static_cast<Eigen::Index>(c)) = psi.row(i).transpose();
    }
    return f;
  };
  k.measure = ReferenceMeasure::counting(L.sites);
  k.measure.scale = ScaleMap{x_star, kappa_star / ens.beta, 1.0, static_cast<double>(ens.n)};
  return k;
}

std::function<double(double)> krawtchouk_potential(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("krawtchouk: need 0 < p < 1");
  const double slope = std::log(p / (1.0 - p));
  return [slope](double x) { return -x * slope; };
}

std::function<double(double)> hahn_potential(double a, double b, double c, double d) {
  if (!(a > 0.0) || !(b > 1.0))
    throw ParameterError("hahn: need a > 0 and b > 1 so V is finite on [0,1]");
  return [=](double x) {
    return -(a + x) * std::log(a + x) - (b - x) * std::log(b - x) + c * x + d;
  };
}

double krawtchouk_density(double x, double p, double beta) {
  const double q = 1.0 - p;
  const double B = 4.0 * p * q + 2.0 * (x - p) * (q - p);
  const double C = (x - p) * (x - p);
  const double disc = B * B - 4.0 * C;
  if (disc <= 0.0) return 0.0;
  const double D = std::sqrt(disc);
  auto clamp1 = [](double z) { return std::clamp(z, -1.0, 1.0); };
  return (std::asin(clamp1((2.0 * beta - B) / D)) - std::asin(clamp1(-B / D))) /
         (std::numbers::pi * beta);
}

EquilibriumDensity constrained_equilibrium(const std::function<double(double)>& V,
                                           const NodeDensity& rho, double beta,
                                           const std::vector<double>& grid,
                                           const EquilibriumOptions& opts) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ParameterError("constrained_equilibrium: need 0 < beta < 1");
  if (grid.size() < 3 || grid.front() < 0.0 || grid.back() > 1.0)
    throw ParameterError("constrained_equilibrium: grid must lie in [0,1]");
  const std::size_t m = grid.size() - 1;
  std::vector<double> cap(m);
  for (std::size_t i = 0; i < m; ++i)
    cap[i] = (grid[i + 1] - grid[i]) * rho(0.5 * (grid[i] + grid[i + 1])) / beta;
  auto field = [&](double x) { return (V(x) - log_potential(rho, x)) / beta; };
  EquilibriumDensity out = solve_log_energy(field, grid, cap, opts);
  out.regions.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = out.density[i] * beta / rho(out.centers[i]);
    out.regions[i] = r <= 1e-3 ? Region::Void : (r >= 1.0 - 1e-3 ? Region::Saturated : Region::Band);
  }
  return out;
}

}  // namespace deform
