#include "deform/potential.hpp"

#include <cmath>
#include <numbers>

#include "deform/errors.hpp"
#include "deform/expression.hpp"

namespace deform {

double EquilibriumData::edge_scale() const {
  return std::pow(std::numbers::pi * edge_constant, 2.0 / 3.0);
}

Potential Potential::quadratic(double center) {
  Potential p;
  p.name = center == 0.0 ? "quadratic" : "quadratic(center=" + std::to_string(center) + ")";
  p.V = [center](double x) { return (x - center) * (x - center); };
  p.is_convex = true;
  p.is_even = center == 0.0;
  EquilibriumData d;
  d.x_minus = center - std::numbers::sqrt2;
  d.x_plus = center + std::numbers::sqrt2;
  d.density = [center](double x) {
    const double y = x - center;
    const double r = 2.0 - y * y;
    return r > 0.0 ? std::sqrt(r) / std::numbers::pi : 0.0;
  };
  d.edge_constant = std::pow(2.0, 0.75) / std::numbers::pi;
  p.analytic = d;
  return p;
}

Potential Potential::quartic() {
  Potential p;
  p.name = "quartic";
  p.V = [](double x) { return 0.25 * x * x * x * x; };
  p.is_convex = true;
  p.is_even = true;
  const double b2 = 4.0 / std::sqrt(3.0);
  const double b = std::sqrt(b2);
  EquilibriumData d;
  d.x_minus = -b;
  d.x_plus = b;
  d.density = [b2](double x) {
    const double r = b2 - x * x;
    return r > 0.0 ? (x * x + 0.5 * b2) * std::sqrt(r) / (2.0 * std::numbers::pi) : 0.0;
  };
  d.edge_constant = 1.5 * b2 * std::sqrt(2.0 * b) / (2.0 * std::numbers::pi);
  p.analytic = d;
  return p;
}

Potential Potential::custom(const std::string& expression) {
  const Expression e = Expression::parse(expression);
  Potential p;
  p.name = "custom:" + expression;
  p.V = [e](double x) { return e(x); };
  bool convex = true;
  bool even = true;
  const double h = 1e-2;
  for (int i = -1000; i <= 1000; ++i) {
    const double x = 0.01 * i;
    const double vm = e(x - h), v0 = e(x), vp = e(x + h);
    if (!std::isfinite(v0)) throw ParameterError("potential " + expression + " not finite at " + std::to_string(x));
    if (vm - 2.0 * v0 + vp < -1e-9 * (1.0 + std::abs(v0))) convex = false;
    if (std::abs(e(-x) - v0) > 1e-12 * (1.0 + std::abs(v0))) even = false;
  }
  p.is_convex = convex;
  p.is_even = even;
  return p;
}

Potential Potential::from_spec(const std::string& spec) {
  if (spec == "quadratic") return quadratic();
  if (spec == "quartic") return quartic();
  if (spec.rfind("custom:", 0) == 0) return custom(spec.substr(7));
  throw ConfigError("unknown potential '" + spec + "'");
}

bool Potential::growth_ok() const {
  for (double sign : {1.0, -1.0}) {
    double prev = -INFINITY;
    for (double r : {1e2, 1e3, 1e4}) {
      const double x = sign * r;
      const double g = V(x) / std::log1p(x * x);
      if (!(g > prev) || !(g > 0.0)) return false;
      prev = g;
    }
  }
  return true;
}

double Potential::argmin() const {
  double best = 0.0;
  double vbest = V(0.0);
  for (int i = -2000; i <= 2000; ++i) {
    const double x = 0.01 * i;
    const double v = V(x);
    if (v < vbest) {
      vbest = v;
      best = x;
    }
  }
  double a = best - 0.01, b = best + 0.01;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (V(c) < V(d))
      b = d;
    else
      a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace deform
