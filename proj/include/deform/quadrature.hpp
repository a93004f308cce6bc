#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace deform {

/// Nodes and positive weights approximating an integral over [a, b].
///
/// Nodes are strictly increasing. A Gauss-Legendre rule of order m is exact
/// for polynomials of degree <= 2m - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Legendre rule of the given order on a finite interval [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

/// Composite Gauss-Legendre: one panel between consecutive breakpoints,
/// each panel further split so no panel is longer than `max_panel`.
/// Breakpoints are sorted and de-duplicated; jumps of the integrand placed
/// on breakpoints are integrated without a node on the discontinuity.
QuadratureRule composite_gauss_legendre(std::vector<double> breakpoints,
                                        int order_per_panel,
                                        double max_panel);

/// Affine microscopic scaling x(u) = x* + u / (c n^gamma).
struct ScaleMap {
  double x_star = 0.0;
  double c = 1.0;
  double gamma = 1.0;
  double n = 1.0;

  double factor() const;  // c n^gamma
  double to_x(double u) const { return x_star + u / factor(); }
  double to_u(double x) const { return (x - x_star) * factor(); }
};

/// The reference measure a kernel acts against: either a density w.r.t.
/// Lebesgue measure on an interval, or the counting measure on nodes.
struct ContinuousDensity {
  std::function<double(double)> density;
  double lo = 0.0;
  double hi = 0.0;
};

struct Counting {
  std::vector<double> nodes;  // strictly increasing
};

class ReferenceMeasure {
 public:
  static ReferenceMeasure lebesgue(double lo, double hi);
  static ReferenceMeasure continuous(std::function<double(double)> density,
                                     double lo, double hi);
  static ReferenceMeasure counting(std::vector<double> nodes);

  bool is_counting() const noexcept {
    return std::holds_alternative<Counting>(kind_);
  }
  const Counting& counting_nodes() const { return std::get<Counting>(kind_); }
  const ContinuousDensity& density() const {
    return std::get<ContinuousDensity>(kind_);
  }

  ScaleMap scale;  // metadata of the map that produced this measure

 private:
  std::variant<ContinuousDensity, Counting> kind_;
};

}  // namespace deform
