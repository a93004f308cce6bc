#include <cmath>

#include "deform/errors.hpp"
#include "deform/symbols.hpp"
#include "doctest.h"

using namespace deform;

TEST_CASE("interval families use the open interval") {
  const auto ind = DeformationSymbol::indicator(-1.0, 2.0);
  CHECK(ind(-1.0) == 0.0);
  CHECK(ind(-0.999) == 1.0);
  CHECK(ind(2.0) == 0.0);
  const auto th = DeformationSymbol::thinned(0.5, -1.0, 1.0);
  CHECK(th(0.0) == 0.5);
  CHECK(th(1.5) == 0.0);
  const auto half_line = DeformationSymbol::indicator(1.0, INFINITY);
  CHECK(half_line(1e6) == 1.0);
  CHECK(half_line.breakpoints() == std::vector<double>{1.0});
}

TEST_CASE("fermi symbols") {
  const auto two = DeformationSymbol::fermi(1.0, 0.0, true);
  CHECK(two(0.0) == doctest::Approx(0.5));
  CHECK(two(3.0) == doctest::Approx(two(-3.0)));
  CHECK(two(3.0) == doctest::Approx(1.0 / (1.0 + std::exp(3.0))));
  const auto one = DeformationSymbol::fermi(2.0, 1.0, false);
  CHECK(one(-5.0) == doctest::Approx(1.0 / (1.0 + std::exp(9.0))));
  CHECK(one(5.0) == doctest::Approx(1.0 / (1.0 + std::exp(-11.0))));
  // no overflow far out
  CHECK(two(1e4) == 0.0);
  CHECK(one(1e4) == doctest::Approx(1.0));
  const auto [lo, hi] = two.effective_support(1e-10);
  CHECK(two(hi) <= 1e-10 * 1.0001);
  CHECK(lo == -hi);
  CHECK(std::isinf(one.effective_support(1e-10).second));
}

TEST_CASE("one minus exp") {
  const auto s = DeformationSymbol::one_minus_exp([](double x) { return 4.0 - x * x; }, -2.0, 2.0);
  CHECK(s(0.0) == doctest::Approx(1.0 - std::exp(-4.0)));
  CHECK(s(2.5) == 0.0);
  CHECK_THROWS_AS(DeformationSymbol::one_minus_exp([](double x) { return x; }, -1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(DeformationSymbol::one_minus_exp([](double) { return 1.0; }, 0.0, INFINITY),
                  ParameterError);
}

TEST_CASE("symbols take values in [0, 1]") {
  const DeformationSymbol all[] = {
      DeformationSymbol::zero(), DeformationSymbol::indicator(-1, 1), DeformationSymbol::thinned(0.3, 0, 4),
      DeformationSymbol::fermi(0.7, 2.0, true), DeformationSymbol::fermi(1.0, 0.0, false),
      DeformationSymbol::parse("one-minus-exp:3*(1-x^2),-1,1", false)};
  for (const auto& s : all)
    for (double u = -6.0; u <= 6.0; u += 0.01) {
      CHECK(s(u) >= 0.0);
      CHECK(s(u) <= 1.0);
    }
}

TEST_CASE("scaling and sigma_n") {
  const auto s = DeformationSymbol::indicator(-1.0, 1.0);
  const auto sn = make_sigma_n(s, 100.0, 0.5);
  CHECK(sn(0.09) == 1.0);
  CHECK(sn(0.11) == 0.0);
  CHECK(sn.breakpoints() == std::vector<double>{-0.1, 0.1});
  CHECK(make_sigma_n(s, 100.0, 0.0)(0.5) == 1.0);
  CHECK(sn.describe().find('@') != std::string::npos);
  CHECK_THROWS_AS(make_sigma_n(s, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(s.scaled(0.0), ParameterError);
}

TEST_CASE("symbol parsing") {
  CHECK(DeformationSymbol::parse("zero", false).is_zero());
  CHECK(DeformationSymbol::parse("indicator:1,inf", true).family() == SymbolFamily::Indicator);
  CHECK(DeformationSymbol::parse("thinned:0.5,-1,1", false)(0.2) == 0.5);
  const auto f = DeformationSymbol::parse("fermi:1,0", true);
  CHECK(f(10.0) > 0.99);  // one-sided at the edge
  CHECK(DeformationSymbol::parse("fermi:1,0", false)(10.0) < 1e-4);
  CHECK(DeformationSymbol::parse("one-minus-exp:0.5*(4-x^2),-2,2", false).family() == SymbolFamily::OneMinusExp);
  CHECK_THROWS_AS(DeformationSymbol::parse("gaussian:1", false), ConfigError);
  CHECK_THROWS_AS(DeformationSymbol::parse("thinned:2,-1,1", false), ConfigError);
  CHECK_THROWS_AS(DeformationSymbol::parse("indicator:1", false), ConfigError);
  CHECK_THROWS_AS(DeformationSymbol::parse("indicator:2,1", false), ConfigError);
  CHECK_THROWS_AS(DeformationSymbol::parse("fermi:x,1", false), ConfigError);
}

TEST_CASE("bump is C2 with the requested peak") {
  const TestFunction h = TestFunction::bump(0.9, -1.0, 1.0);
  CHECK(h(0.0) == doctest::Approx(0.9));
  CHECK(h(1.0) == 0.0);
  CHECK(h(-1.2) == 0.0);
  CHECK_FALSE(h.outside_hypotheses);
  // second differences stay bounded across the support ends
  const double d = 1e-3;
  for (double u : {-1.0, 1.0}) {
    const double second = (h(u + d) - 2.0 * h(u) + h(u - d)) / (d * d);
    CHECK(std::abs(second) < 1e-2);
  }
  for (double u = -1.5; u <= 1.5; u += 0.01) CHECK(h(u) < 1.0);
}

TEST_CASE("soft indicator") {
  const TestFunction h = TestFunction::soft_indicator(0.5, -0.5, 0.5, 0.2);
  CHECK(h(0.0) == 0.5);
  CHECK(h(-0.5) == doctest::Approx(0.25));
  CHECK(h(0.6) == 0.0);
  CHECK(h.lo == doctest::Approx(-0.6));
  CHECK(h.breakpoints.size() == 4u);
  CHECK_THROWS_AS(TestFunction::soft_indicator(0.5, -0.5, 0.5, 0.0), ParameterError);
  const TestFunction hard = TestFunction::soft_indicator(0.5, -0.5, 0.5, 0.0, true);
  CHECK(hard.outside_hypotheses);
  CHECK(hard(0.5) == 0.0);
}

TEST_CASE("test function parsing") {
  CHECK(TestFunction::parse("zero", false)(0.0) == 0.0);
  CHECK(TestFunction::parse("bump:0.5,0,2", false)(1.0) == doctest::Approx(0.5));
  CHECK(TestFunction::parse("indicator:0.5,-0.5,0.5,0.1", false)(0.0) == 0.5);
  CHECK_THROWS_AS(TestFunction::parse("indicator:0.5,-0.5,0.5,0", false), ConfigError);
  CHECK_NOTHROW(TestFunction::parse("indicator:0.5,-0.5,0.5,0", true));
  CHECK_THROWS_AS(TestFunction::parse("bump:1.0,0,1", false), ConfigError);
  CHECK_THROWS_AS(TestFunction::parse("bump:0.5,0,inf", false), ConfigError);
  CHECK_THROWS_AS(TestFunction::parse("wave:1", false), ConfigError);
}
