#include "deform/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deform/errors.hpp"
#include "deform/expression.hpp"

namespace deform {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw ConfigError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "'");
  }
}

void check_interval(double a, double b) {
  if (!(a < b)) throw ParameterError("symbol interval needs a < b");
}

std::string fmt(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

}  // namespace

DeformationSymbol DeformationSymbol::zero() { return {}; }

DeformationSymbol DeformationSymbol::indicator(double a, double b) {
  check_interval(a, b);
  DeformationSymbol s;
  s.family_ = SymbolFamily::Indicator;
  s.a_ = a;
  s.b_ = b;
  return s;
}

DeformationSymbol DeformationSymbol::thinned(double gamma, double a, double b) {
  check_interval(a, b);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("thinned: gamma must lie in [0,1]");
  DeformationSymbol s;
  s.family_ = SymbolFamily::Thinned;
  s.gamma_ = gamma;
  s.a_ = a;
  s.b_ = b;
  return s;
}

DeformationSymbol DeformationSymbol::fermi(double t, double s_param, bool two_sided) {
  if (!(t > 0.0)) throw ParameterError("fermi: t must be > 0");
  if (!std::isfinite(s_param)) throw ParameterError("fermi: s must be finite");
  DeformationSymbol s;
  s.family_ = SymbolFamily::Fermi;
  s.t_ = t;
  s.s_ = s_param;
  s.two_sided_ = two_sided;
  return s;
}

DeformationSymbol DeformationSymbol::one_minus_exp(std::function<double(double)> f, double lo,
                                                   double hi, std::string label) {
  check_interval(lo, hi);
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ParameterError("one-minus-exp: f needs a bounded support");
  for (int i = 0; i <= 1000; ++i) {
    const double v = f(lo + (hi - lo) * i / 1000.0);
    if (v < 0.0 || std::isnan(v)) throw ParameterError("one-minus-exp: f must be >= 0");
  }
  DeformationSymbol s;
  s.family_ = SymbolFamily::OneMinusExp;
  s.f_ = std::move(f);
  s.a_ = lo;
  s.b_ = hi;
  s.label_ = std::move(label);
  return s;
}

DeformationSymbol DeformationSymbol::parse(const std::string& spec, bool edge) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : split(spec.substr(colon + 1), ',');
  auto want = [&](std::size_t k) {
    if (args.size() != k)
      throw ConfigError("symbol '" + head + "' takes " + std::to_string(k) + " parameters");
  };
  try {
    if (head == "zero") {
      want(0);
      return zero();
    }
    if (head == "indicator") {
      want(2);
      return indicator(number(args[0]), number(args[1]));
    }
    if (head == "thinned") {
      want(3);
      return thinned(number(args[0]), number(args[1]), number(args[2]));
    }
    if (head == "fermi") {
      want(2);
      return fermi(number(args[0]), number(args[1]), !edge);
    }
    if (head == "one-minus-exp") {
      want(3);
      const Expression e = Expression::parse(args[0]);
      return one_minus_exp([e](double u) { return e(u); }, number(args[1]), number(args[2]),
                           args[0]);
    }
  } catch (const ParameterError& err) {
    throw ConfigError(std::string("symbol: ") + err.what());
  }
  throw ConfigError("unknown symbol family '" + head + "'");
}

double DeformationSymbol::operator()(double u) const {
  const double x = lambda_ * u;
  switch (family_) {
    case SymbolFamily::Zero:
      return 0.0;
    case SymbolFamily::Indicator:
      return (x > a_ && x < b_) ? 1.0 : 0.0;
    case SymbolFamily::Thinned:
      return (x > a_ && x < b_) ? gamma_ : 0.0;
    case SymbolFamily::Fermi: {
      const double z = two_sided_ ? t_ * std::abs(x) - s_ : -t_ * x - s_;
      return z > 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
    }
    case SymbolFamily::OneMinusExp:
      if (!(x >= a_ && x <= b_)) return 0.0;
      return -std::expm1(-f_(x));
  }
  return 0.0;
}

DeformationSymbol DeformationSymbol::scaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("symbol scaling must be positive and finite");
  DeformationSymbol s = *this;
  s.lambda_ *= lambda;
  return s;
}

std::string DeformationSymbol::describe() const {
  std::string out;
  switch (family_) {
    case SymbolFamily::Zero:
      return "zero";
    case SymbolFamily::Indicator:
      out = "indicator(" + fmt(a_) + "," + fmt(b_) + ")";
      break;
    case SymbolFamily::Thinned:
      out = "thinned(" + fmt(gamma_) + "," + fmt(a_) + "," + fmt(b_) + ")";
      break;
    case SymbolFamily::Fermi:
      out = std::string(two_sided_ ? "fermi2" : "fermi1") + "(" + fmt(t_) + "," + fmt(s_) + ")";
      break;
    case SymbolFamily::OneMinusExp:
      out = "one-minus-exp(" + label_ + "," + fmt(a_) + "," + fmt(b_) + ")";
      break;
  }
  if (lambda_ != 1.0) out += "@" + fmt(lambda_);
  return out;
}

std::vector<double> DeformationSymbol::breakpoints() const {
  std::vector<double> out;
  if (family_ == SymbolFamily::Zero || family_ == SymbolFamily::Fermi) return out;
  if (std::isfinite(a_)) out.push_back(a_ / lambda_);
  if (std::isfinite(b_)) out.push_back(b_ / lambda_);
  return out;
}

std::pair<double, double> DeformationSymbol::effective_support(double tol) const {
  switch (family_) {
    case SymbolFamily::Zero:
      return {0.0, 0.0};
    case SymbolFamily::Indicator:
    case SymbolFamily::Thinned:
    case SymbolFamily::OneMinusExp:
      return {a_ / lambda_, b_ / lambda_};
    case SymbolFamily::Fermi: {
      const double reach = (s_ - std::log(tol)) / (t_ * lambda_);
      if (reach <= 0.0) return {0.0, 0.0};
      if (two_sided_) return {-reach, reach};
      return {-reach, INFINITY};
    }
  }
  return {0.0, 0.0};
}

DeformationSymbol make_sigma_n(const DeformationSymbol& sigma, double n, double t) {
  if (!(t >= 0.0)) throw ParameterError("make_sigma_n: t must be >= 0");
  if (!(n >= 1.0)) throw ParameterError("make_sigma_n: n must be >= 1");
  if (t == 0.0) return sigma;
  return sigma.scaled(std::pow(n, t));
}

TestFunction TestFunction::zero() {
  TestFunction f;
  f.name = "zero";
  f.h = [](double) { return 0.0; };
  return f;
}

TestFunction TestFunction::bump(double hmax, double a, double b) {
  if (!(hmax >= 0.0 && hmax < 1.0)) throw ParameterError("bump: need 0 <= hmax < 1");
  check_interval(a, b);
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("bump: bounded support");
  TestFunction f;
  f.name = "bump(" + fmt(hmax) + "," + fmt(a) + "," + fmt(b) + ")";
  f.lo = a;
  f.hi = b;
  f.breakpoints = {a, b};
  f.h = [=](double u) {
    if (!(u > a && u < b)) return 0.0;
    const double z = (2.0 * u - a - b) / (b - a);
    const double q = 1.0 - z * z;
    return hmax * q * q * q;
  };
  return f;
}

TestFunction TestFunction::soft_indicator(double height, double a, double b, double ramp,
                                          bool allow_discontinuous) {
  if (!(height >= 0.0 && height < 1.0)) throw ParameterError("indicator: need 0 <= height < 1");
  check_interval(a, b);
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("indicator: bounded support");
  if (!(ramp >= 0.0) || ramp >= b - a) throw ParameterError("indicator: ramp must lie in [0, b-a)");
  if (ramp == 0.0 && !allow_discontinuous)
    throw ParameterError("indicator: a hard indicator is outside the theorem hypotheses");
  TestFunction f;
  f.name = "indicator(" + fmt(height) + "," + fmt(a) + "," + fmt(b) + "," + fmt(ramp) + ")";
  f.outside_hypotheses = ramp == 0.0;
  const double r = 0.5 * ramp;
  f.lo = a - r;
  f.hi = b + r;
  f.breakpoints = ramp == 0.0 ? std::vector<double>{a, b}
                              : std::vector<double>{a - r, a + r, b - r, b + r};
  f.h = [=](double u) {
    if (ramp == 0.0) return (u > a && u < b) ? height : 0.0;
    const double up = std::clamp((u - (a - r)) / ramp, 0.0, 1.0);
    const double down = std::clamp(((b + r) - u) / ramp, 0.0, 1.0);
    return height * std::min(up, down);
  };
  return f;
}

TestFunction TestFunction::parse(const std::string& spec, bool allow_discontinuous) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : split(spec.substr(colon + 1), ',');
  try {
    if (head == "zero" && args.empty()) return zero();
    if (head == "bump" && args.size() == 3)
      return bump(number(args[0]), number(args[1]), number(args[2]));
    if (head == "indicator" && args.size() == 4)
      return soft_indicator(number(args[0]), number(args[1]), number(args[2]), number(args[3]),
                            allow_discontinuous);
  } catch (const ParameterError& err) {
    throw ConfigError(std::string("test function: ") + err.what());
  }
  throw ConfigError("bad test function '" + spec + "'");
}

}  // namespace deform
