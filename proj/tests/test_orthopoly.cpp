#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "deform/errors.hpp"
#include "deform/orthopoly.hpp"
#include "doctest.h"
#include "oracle_io.hpp"

using namespace deform;

TEST_CASE("quadratic potential gives the scaled Hermite recurrence") {
  for (int n : {1, 5, 20, 50}) {
    const BiorthogonalSystem s = stieltjes_recurrence(Potential::quadratic(), n);
    REQUIRE(s.a.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) CHECK(std::abs(s.a[k]) < 1e-12);
    for (int k = 1; k <= n; ++k)
      CHECK(s.b[k] == doctest::Approx(std::sqrt(k / (2.0 * n))).epsilon(1e-12));
    CHECK(s.orthonormality_residual < 1e-10);
  }
}

TEST_CASE("shifted quadratic shifts a_k only") {
  const BiorthogonalSystem s = stieltjes_recurrence(Potential::quadratic(0.7), 12);
  for (int k = 0; k < 12; ++k) CHECK(s.a[k] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s.b[12] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("quartic recurrence matches the high-precision table") {
  const BiorthogonalSystem s = stieltjes_recurrence(Potential::quartic(), 10);
  for (const auto& r : oracle_rows("quartic_recurrence.txt")) {
    const int k = std::stoi(r[0]);
    CHECK(std::abs(s.a[k] - std::stod(r[1])) < 1e-12);
    CHECK(s.b[k + 1] == doctest::Approx(std::stod(r[2])).epsilon(1e-12));
  }
}

TEST_CASE("orthonormality and trace for both potentials up to n = 50") {
  for (const Potential& V : {Potential::quadratic(), Potential::quartic()}) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {2, 10, 25, 50}) {
      const BiorthogonalSystem s = stieltjes_recurrence(V, n);
      const QuadratureRule fine = composite_gauss_legendre({s.support_lo, s.support_hi}, 31, 0.25);
      CHECK(orthonormality_residual(s, fine) < 1e-8);
      const double trace = fine.integrate([&](double x) { return cd_kernel(s, x, x); });
      CHECK(std::abs(trace - n) < 1e-8);
    }
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
  }
}

TEST_CASE("christoffel-darboux formula agrees with direct summation") {
  const BiorthogonalSystem s = stieltjes_recurrence(Potential::quartic(), 30);
  for (double x : {-1.2, -0.3, 0.0, 0.41, 1.0})
    for (double y : {-1.0, 0.0, 0.41, 0.4100001, 1.3}) {
      const double ref = cd_kernel_sum(s, x, y);
      CHECK(std::abs(cd_kernel(s, x, y) - ref) < 1e-10 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("kernel reproduces polynomials of degree < n") {
  // int k_n(x, y) y^2 w dy = x^2 for n >= 3
  const Potential V = Potential::quartic();
  const BiorthogonalSystem s = stieltjes_recurrence(V, 8);
  const QuadratureRule q = composite_gauss_legendre({s.support_lo, s.support_hi}, 30, 0.5);
  for (double x : {-0.9, 0.2, 1.1}) {
    const double got = q.integrate(
        [&](double y) { return cd_kernel(s, x, y) * std::sqrt(s.scaled_weight(y)) * y * y; });
    CHECK(got / std::sqrt(s.scaled_weight(x)) == doctest::Approx(x * x).epsilon(1e-10));
  }
}

TEST_CASE("bulk rescaling approaches the sine kernel") {
  const double kappa = std::sqrt(2.0) / std::numbers::pi;
  double prev = 1.0;
  for (int n : {10, 40}) {
    const KernelField K = rescaled_bulk_kernel(stieltjes_recurrence(Potential::quadratic(), n), 0.0, kappa);
    double err = 0.0;
    for (double u : {-1.0, 0.0, 0.5})
      for (double v : {-0.5, 0.0, 1.5}) err = std::max(err, std::abs(K(u, v) - std::sin(M_PI * (u - v)) / (M_PI * (u - v) + (u == v)) - (u == v)));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.02);
  CHECK_THROWS_AS(rescaled_bulk_kernel(stieltjes_recurrence(Potential::quadratic(), 4), 0.0, 0.0),
                  ParameterError);
}

TEST_CASE("potential specs") {
  CHECK(Potential::from_spec("quadratic").is_even);
  CHECK(Potential::from_spec("quartic").is_convex);
  const Potential c = Potential::from_spec("custom:x^2/2 + x^4/20");
  CHECK(c(1.0) == doctest::Approx(0.55));
  CHECK(c.is_even);
  CHECK(c.growth_ok());
  CHECK(Potential::quadratic(0.5).argmin() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(Potential::from_spec("cubic"), ConfigError);
  CHECK_THROWS_AS(stieltjes_recurrence(Potential::quadratic(), 0), ParameterError);
}
