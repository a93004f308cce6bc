#pragma once

#include <functional>
#include <optional>
#include <string>

namespace deform {

/// Closed-form equilibrium data: support, density and the soft-edge
/// constant C of density(x) ~ C sqrt(x+ - x) at the right edge.
struct EquilibriumData {
  double x_minus = 0.0;
  double x_plus = 0.0;
  std::function<double(double)> density;
  double edge_constant = 0.0;

  /// Edge scale c with K_n(u, v) = k_n(x+ + u/(c n^{2/3}), ...)/(c n^{2/3}).
  double edge_scale() const;
};

/// External field V on R (weight w_n = exp(-n V)).
struct Potential {
  std::string name;
  std::function<double(double)> V;
  bool is_convex = false;
  bool is_even = false;
  std::optional<EquilibriumData> analytic;

  double operator()(double x) const { return V(x); }

  /// V(x) = (x - center)^2, with its semicircle equilibrium.
  static Potential quadratic(double center = 0.0);
  /// V(x) = x^4 / 4.
  static Potential quartic();
  /// V from an expression in x; convexity and parity are probed numerically.
  static Potential custom(const std::string& expression);
  /// "quadratic", "quartic" or "custom:<expr>".
  static Potential from_spec(const std::string& spec);

  /// V(x)/log(1+x^2) increasing past |x| in {1e2, 1e3, 1e4}.
  bool growth_ok() const;

  /// Location of the minimum of V (coarse scan then golden section).
  double argmin() const;
};

}  // namespace deform
