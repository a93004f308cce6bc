#include <chrono>
#include <cmath>
#include <numbers>

#include "deform/equilibrium.hpp"
#include "deform/errors.hpp"
#include "deform/experiments.hpp"
#include "doctest.h"

using namespace deform;

namespace {

EquilibriumDensity numeric(const Potential& V, int cells = 2000) {
  EquilibriumOptions o;
  o.prefer_analytic = false;
  return equilibrium_density(V, default_equilibrium_grid(V, cells), o);
}

double inner_sup_error(const EquilibriumDensity& eq, const EquilibriumData& ref, double frac) {
  const double mid = 0.5 * (ref.x_minus + ref.x_plus), half = 0.5 * frac * (ref.x_plus - ref.x_minus);
  double err = 0.0;
  for (std::size_t i = 0; i < eq.centers.size(); ++i)
    if (std::abs(eq.centers[i] - mid) <= half)
      err = std::max(err, std::abs(eq.density[i] - ref.density(eq.centers[i])));
  return err;
}

}  // namespace

TEST_CASE("semicircle from the numerical solver") {
  const auto t0 = std::chrono::steady_clock::now();
  const Potential V = Potential::quadratic();
  const EquilibriumDensity eq = numeric(V);
  CHECK_FALSE(eq.analytic);
  CHECK(std::abs(eq.mass - 1.0) < 1e-6);
  CHECK(inner_sup_error(eq, *V.analytic, 0.85) < 1e-2);
  // second moment of the semicircle on [-sqrt2, sqrt2] is 1/2
  double m2 = 0.0;
  const double h = eq.edges[1] - eq.edges[0];
  for (std::size_t i = 0; i < eq.centers.size(); ++i) m2 += eq.density[i] * h * eq.centers[i] * eq.centers[i];
  CHECK(m2 == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(eq.residual < 1e-6);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 60.0);
}

TEST_CASE("closed forms integrate to one") {
  for (const Potential& V : {Potential::quadratic(), Potential::quartic(), Potential::quadratic(-0.4)}) {
    const EquilibriumData& d = *V.analytic;
    double mass = 0.0;
    const int m = 200000;
    const double h = (d.x_plus - d.x_minus) / m;
    for (int i = 0; i < m; ++i) mass += d.density(d.x_minus + (i + 0.5) * h) * h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("quartic closed form against the numerical solver") {
  const Potential V = Potential::quartic();
  const EquilibriumDensity eq = numeric(V);
  CHECK(inner_sup_error(eq, *V.analytic, 0.85) < 1e-2);
  CHECK(eq.x_plus == doctest::Approx(V.analytic->x_plus).epsilon(5e-3));
}

TEST_CASE("soft edge constant fitted from numerics matches the closed form") {
  // "custom" hides the closed form, so soft_edge fits C from the solver
  const auto [xq, cq] = soft_edge(Potential::quartic());
  const auto [xn, cn] = soft_edge(Potential::custom("x^4/4"));
  CHECK(xn == doctest::Approx(xq).epsilon(5e-3));
  CHECK(cn == doctest::Approx(cq).epsilon(3e-2));
  const auto [x2, c2] = soft_edge(Potential::quadratic());
  CHECK(x2 == doctest::Approx(std::numbers::sqrt2));
  CHECK(c2 == doctest::Approx(std::pow(std::pow(2.0, 0.75), 2.0 / 3.0)));
}

TEST_CASE("capped solver keeps the density under the cap") {
  const Potential V = Potential::quadratic();
  const std::vector<double> grid = default_equilibrium_grid(V, 400);
  const double h = grid[1] - grid[0];
  // caps are cell masses
  const std::vector<double> cap(grid.size() - 1, 0.3 * h);
  const EquilibriumDensity eq = solve_log_energy(V.V, grid, cap);
  double mass = 0.0;
  for (std::size_t i = 0; i < eq.density.size(); ++i) {
    CHECK(eq.density[i] <= 0.3 + 1e-12);
    mass += eq.density[i] * h;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solver input checks") {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(solve_log_energy([](double x) { return x; }, grid, {0.1, 0.1}), ParameterError);
  CHECK_THROWS_AS(solve_log_energy([](double x) { return x; }, {0.0, 0.1, 0.5}, {}), ParameterError);
  CHECK_THROWS_AS(default_equilibrium_grid(Potential::quadratic(), 5), ParameterError);
}
