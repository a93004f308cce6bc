#include "deform/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "deform/errors.hpp"
#include "deform/quadrature.hpp"

namespace deform {

namespace {

// Second central difference of G(t) = t^2/2 log|t| - 3 t^2/4 at integer k,
// i.e. the mean of log|k + xi| for xi triangular on [-1, 1].
double log_cell_average(int k) {
  auto G = [](double t) {
    return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t;
  };
  if (k < 20) return G(k + 1.0) - 2.0 * G(k) + G(k - 1.0);
  const double r = 1.0 / (static_cast<double>(k) * k);
  return std::log(static_cast<double>(k)) - r / 12.0 - r * r / 60.0 -
         r * r * r / 168.0;
}

double cell_average(const std::function<double(double)>& f, double a, double b) {
  static const QuadratureRule ref = gauss_legendre(6, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) s += ref.weights[i] * f(a + (b - a) * ref.nodes[i]);
  return s;
}

// Euclidean projection onto { 0 <= x_i <= cap_i, sum x = 1 }.
Eigen::VectorXd project(const Eigen::VectorXd& y, const Eigen::VectorXd& cap) {
  const Eigen::Index m = y.size();
  auto mass = [&](double tau) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::clamp(y[i] - tau, 0.0, cap[i]);
    return s;
  };
  double widest = 1.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::isfinite(cap[i])) widest = std::max(widest, cap[i]);
  double lo = y.minCoeff() - widest;
  double hi = y.maxCoeff();
  for (int it = 0; it < 200 && hi - lo > 1e-17 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  // Exact shift on the free set found by bisection.
  double tau = 0.5 * (lo + hi);
  double fixed = 0.0, free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = y[i] - tau;
    if (v <= 0.0) continue;
    if (v >= cap[i]) {
      fixed += cap[i];
    } else {
      free_sum += y[i];
      ++free_count;
    }
  }
  if (free_count > 0) tau = (free_sum + fixed - 1.0) / free_count;
  Eigen::VectorXd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x[i] = std::clamp(y[i] - tau, 0.0, cap[i]);
  return x;
}

// min of g.s over the feasible set: fill the cheapest cells first.
double linear_minimum(const Eigen::VectorXd& g, const Eigen::VectorXd& cap) {
  std::vector<Eigen::Index> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g[a] < g[b]; });
  double left = 1.0, value = 0.0;
  for (Eigen::Index i : order) {
    const double take = std::min(left, cap[i]);
    value += take * g[i];
    left -= take;
    if (left <= 0.0) break;
  }
  return value;
}

}  // namespace

double EquilibriumDensity::operator()(double x) const {
  if (edges.empty() || x < edges.front() || x > edges.back()) return 0.0;
  const double h = edges[1] - edges[0];
  const std::size_t i =
      std::min(density.size() - 1, static_cast<std::size_t>((x - edges.front()) / h));
  return density[i];
}

std::vector<double> default_equilibrium_grid(const Potential& V, int cells) {
  if (cells < 10) throw ParameterError("default_equilibrium_grid: need >= 10 cells");
  const double x0 = V.argmin();
  const double v0 = V(x0);
  auto march = [&](double dir) {
    double x = x0;
    while (V(x) - v0 < 6.0) {
      x += dir * 0.01 * (1.0 + std::abs(x));
      if (std::abs(x - x0) > 1e6) throw ParameterError("potential does not confine");
    }
    return x;
  };
  double lo = march(-1.0), hi = march(1.0);
  if (V.analytic) {
    lo = std::min(lo, V.analytic->x_minus - 0.2);
    hi = std::max(hi, V.analytic->x_plus + 0.2);
  }
  std::vector<double> edges(cells + 1);
  for (int i = 0; i <= cells; ++i) edges[i] = lo + (hi - lo) * i / cells;
  return edges;
}

EquilibriumDensity solve_log_energy(const std::function<double(double)>& field,
                                    const std::vector<double>& edges,
                                    const std::vector<double>& cap_in,
                                    const EquilibriumOptions& opts) {
  if (edges.size() < 3) throw ParameterError("solve_log_energy: need at least two cells");
  const Eigen::Index m = static_cast<Eigen::Index>(edges.size()) - 1;
  const double h = (edges.back() - edges.front()) / m;
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(edges[i + 1] - edges[i] - h) > 1e-9 * h)
      throw ParameterError("solve_log_energy: grid must be uniform");

  std::vector<double> t(m);
  for (Eigen::Index k = 0; k < m; ++k)
    t[k] = -log_cell_average(static_cast<int>(k)) - std::log(h);
  Eigen::MatrixXd L(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) L(i, j) = t[std::abs(i - j)];

  Eigen::VectorXd fbar(m), cap(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    fbar[i] = cell_average(field, edges[i], edges[i + 1]);
    if (!std::isfinite(fbar[i]))
      throw ParameterError("solve_log_energy: field not finite on the grid");
    cap[i] = cap_in.empty() ? std::numeric_limits<double>::infinity() : cap_in[i];
  }
  if (cap.sum() < 1.0) throw ParameterError("solve_log_energy: capacity below unit mass");

  // Lipschitz constant of the gradient 2 L x by power iteration.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m).normalized();
  double lam = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = L * v;
    lam = w.norm();
    v = w / lam;
  }
  double lip = 2.0 * lam;

  auto energy = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& Lx) {
    return x.dot(Lx) + fbar.dot(x);
  };
  // f(a) - f(b) from d = a - b without cancelling two O(1) energies
  auto change = [&](const Eigen::VectorXd& d, const Eigen::VectorXd& La, const Eigen::VectorXd& Lb) {
    return d.dot(La + Lb) + fbar.dot(d);
  };
  // rounding level of change(); the projection fixes the mass only to
  // rounding, and that drift is seen through the multiplier of the constraint
  auto noise = [&](const Eigen::VectorXd& d, const Eigen::VectorXd& La, const Eigen::VectorXd& Lb) {
    const Eigen::VectorXd a = d.cwiseAbs();
    const double scale = La.cwiseAbs().maxCoeff() + Lb.cwiseAbs().maxCoeff() + fbar.cwiseAbs().maxCoeff();
    return 1e-14 * (a.dot(La.cwiseAbs() + Lb.cwiseAbs()) + a.dot(fbar.cwiseAbs())) +
           4.0 * std::abs(d.sum()) * scale;
  };

  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(m), cap);
  Eigen::VectorXd Lx = L * x;
  double fx = energy(x, Lx);
  Eigen::VectorXd y = x, Ly = Lx;
  double tk = 1.0;
  double gap = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd g = 2.0 * Ly + fbar;
    Eigen::VectorXd xn, Lxn;
    for (int bt = 0; bt < 60; ++bt) {
      xn = project(y - g / lip, cap);
      Lxn = L * xn;
      const Eigen::VectorXd d = xn - y;
      if (change(d, Lxn, Ly) <= g.dot(d) + 0.5 * lip * d.squaredNorm() + noise(d, Lxn, Ly)) break;
      lip *= 2.0;
    }
    const Eigen::VectorXd dx = xn - x;
    const double step = change(dx, Lxn, Lx);
    const double fn = fx + step;
    if (step > noise(dx, Lxn, Lx)) {  // restart the momentum
      if (tk == 1.0) {  // a plain gradient step no longer descends
        const Eigen::VectorXd gx = 2.0 * Lx + fbar;
        gap = gx.dot(x) - linear_minimum(gx, cap);
        break;
      }
      tk = 1.0;
      y = x;
      Ly = Lx;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    const double beta = (tk - 1.0) / tn;
    y = xn + beta * (xn - x);
    Ly = Lxn + beta * (Lxn - Lx);
    x = std::move(xn);
    Lx = std::move(Lxn);
    fx = fn;
    tk = tn;
    if (it % 10 == 0) {
      const Eigen::VectorXd gx = 2.0 * Lx + fbar;
      gap = gx.dot(x) - linear_minimum(gx, cap);
      if (gap < opts.gap_tolerance) break;
    }
  }
  if (!(gap < opts.gap_tolerance))
    throw OptimizationError("solve_log_energy: no convergence after " +
                                std::to_string(it) + " iterations",
                            gap);

  EquilibriumDensity out;
  out.edges = edges;
  out.centers.resize(m);
  out.density.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.centers[i] = 0.5 * (edges[i] + edges[i + 1]);
    out.density[i] = x[i] / h;
  }
  out.mass = x.sum();
  out.energy = fx;
  out.residual = gap;
  out.iterations = it;
  const double peak = *std::max_element(out.density.begin(), out.density.end());
  Eigen::Index first = 0, last = m - 1;
  while (first < m && out.density[first] <= 1e-8 * peak) ++first;
  while (last > first && out.density[last] <= 1e-8 * peak) --last;
  out.x_minus = edges[first];
  out.x_plus = edges[last + 1];
  return out;
}

EquilibriumDensity equilibrium_density(const Potential& V, const std::vector<double>& grid,
                                       const EquilibriumOptions& opts) {
  if (grid.size() < 3) throw ParameterError("equilibrium_density: grid too small");
  if (opts.prefer_analytic && V.analytic) {
    EquilibriumDensity out;
    out.analytic = true;
    out.edges = grid;
    out.x_minus = V.analytic->x_minus;
    out.x_plus = V.analytic->x_plus;
    const std::size_t m = grid.size() - 1;
    out.centers.resize(m);
    out.density.resize(m);
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      out.centers[i] = 0.5 * (grid[i] + grid[i + 1]);
      out.density[i] = V.analytic->density(out.centers[i]);
      mass += cell_average(V.analytic->density, grid[i], grid[i + 1]) * (grid[i + 1] - grid[i]);
    }
    out.mass = mass;
    return out;
  }
  return solve_log_energy(V.V, grid, {}, opts);
}

}  // namespace deform
