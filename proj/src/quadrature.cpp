#include "deform/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "deform/errors.hpp"

namespace deform {

namespace {

// Legendre P_m and P_m' at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (m == 0) return {1.0, 0.0};
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw ParameterError("gauss_legendre: order must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("gauss_legendre: endpoints must be finite");
  if (!(a < b)) throw ParameterError("gauss_legendre: need a < b");

  const int m = order;
  std::vector<double> t(m), w(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_with_derivative(m, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) {
        dp = legendre_with_derivative(m, x).second;
        break;
      }
    }
    const double wi = 2.0 / ((1.0 - x * x) * dp * dp);
    t[i] = -x;
    t[m - 1 - i] = x;
    w[i] = wi;
    w[m - 1 - i] = wi;
  }
  if (m % 2 == 1) t[m / 2] = 0.0;

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = mid + half * t[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::vector<double> breakpoints,
                                        int order_per_panel,
                                        double max_panel) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [](double x, double y) {
                                  return std::abs(x - y) <=
                                         1e-14 * (1.0 + std::abs(x));
                                }),
                    breakpoints.end());
  if (breakpoints.size() < 2)
    throw ParameterError("composite_gauss_legendre: need two breakpoints");
  if (!(max_panel > 0.0))
    throw ParameterError("composite_gauss_legendre: max_panel must be > 0");

  QuadratureRule rule;
  rule.a = breakpoints.front();
  rule.b = breakpoints.back();
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double lo = breakpoints[p];
    const double hi = breakpoints[p + 1];
    const int pieces =
        std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel - 1e-12)));
    const double step = (hi - lo) / pieces;
    for (int q = 0; q < pieces; ++q) {
      const double pa = lo + q * step;
      const double pb = (q + 1 == pieces) ? hi : lo + (q + 1) * step;
      const QuadratureRule panel = gauss_legendre(order_per_panel, pa, pb);
      rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
      rule.weights.insert(rule.weights.end(), panel.weights.begin(),
                          panel.weights.end());
    }
  }
  return rule;
}

double ScaleMap::factor() const { return c * std::pow(n, gamma); }

ReferenceMeasure ReferenceMeasure::lebesgue(double lo, double hi) {
  return continuous([](double) { return 1.0; }, lo, hi);
}

ReferenceMeasure ReferenceMeasure::continuous(
    std::function<double(double)> density, double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("ReferenceMeasure: empty support");
  ReferenceMeasure m;
  m.kind_ = ContinuousDensity{std::move(density), lo, hi};
  return m;
}

ReferenceMeasure ReferenceMeasure::counting(std::vector<double> nodes) {
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw ParameterError("ReferenceMeasure: counting nodes must increase");
  ReferenceMeasure m;
  m.kind_ = Counting{std::move(nodes)};
  return m;
}

}  // namespace deform
