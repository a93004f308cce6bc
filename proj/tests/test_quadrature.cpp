#include <cmath>
#include <numbers>

#include "deform/errors.hpp"
#include "deform/quadrature.hpp"
#include "doctest.h"

using namespace deform;

TEST_CASE("gauss-legendre is exact to degree 2m-1") {
  for (int m : {1, 2, 5, 10, 20, 40}) {
    const QuadratureRule q = gauss_legendre(m, -0.5, 1.5);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      const double exact = (std::pow(1.5, d + 1) - std::pow(-0.5, d + 1)) / (d + 1);
      const double got = q.integrate([d](double x) { return std::pow(x, d); });
      CHECK(got == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("gauss-legendre nodes are increasing with positive weights") {
  const QuadratureRule q = gauss_legendre(30, 0.0, 2.0);
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q.weights[i] > 0.0);
    if (i) CHECK(q.nodes[i] > q.nodes[i - 1]);
    total += q.weights[i];
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("composite rule respects breakpoints and panel length") {
  const QuadratureRule q = composite_gauss_legendre({3.0, -1.0, 0.25, 0.25}, 8, 0.5);
  CHECK(q.a == -1.0);
  CHECK(q.b == 3.0);
  for (double x : q.nodes) CHECK(x != 0.25);
  // a jump at a breakpoint is integrated exactly
  const double got = q.integrate([](double x) { return x < 0.25 ? 1.0 : std::exp(x); });
  CHECK(got == doctest::Approx(1.25 + std::exp(3.0) - std::exp(0.25)).epsilon(1e-14));
  CHECK(q.size() % 8 == 0);
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(q.nodes[i] > q.nodes[i - 1]);
}

TEST_CASE("composite rule integrates a gaussian") {
  const QuadratureRule q = composite_gauss_legendre({-10.0, 10.0}, 20, 1.0);
  const double got = q.integrate([](double x) { return std::exp(-x * x); });
  CHECK(got == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("scale map round trip") {
  const ScaleMap m{0.3, 2.0, 2.0 / 3.0, 64.0};
  CHECK(m.factor() == doctest::Approx(2.0 * 16.0));
  for (double u : {-3.0, 0.0, 1.7}) CHECK(m.to_u(m.to_x(u)) == doctest::Approx(u).epsilon(1e-14));
}

TEST_CASE("reference measures") {
  const ReferenceMeasure c = ReferenceMeasure::counting({0.0, 1.0, 2.0});
  CHECK(c.is_counting());
  CHECK(c.counting_nodes().nodes.size() == 3u);
  const ReferenceMeasure l = ReferenceMeasure::lebesgue(-1.0, 2.0);
  CHECK_FALSE(l.is_counting());
  CHECK(l.density().density(0.4) == 1.0);
  CHECK(l.density().hi == 2.0);
}

TEST_CASE("bad rules are rejected") {
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(gauss_legendre(4, 0.0, INFINITY), ParameterError);
  CHECK_THROWS_AS(composite_gauss_legendre({1.0}, 4, 1.0), ParameterError);
  CHECK_THROWS_AS(composite_gauss_legendre({0.0, 1.0}, 4, 0.0), ParameterError);
  CHECK_THROWS_AS(ReferenceMeasure::counting({0.0, 0.0}), ParameterError);
}
