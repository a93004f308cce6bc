#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace deform {

enum class SymbolFamily { Zero, Indicator, Thinned, Fermi, OneMinusExp };

/// Deformation symbol sigma: R -> [0, 1].
///
/// Interval families use the open interval (a, b); a or b may be infinite.
/// `scaled(lambda)` returns u -> sigma(lambda u).
class DeformationSymbol {
 public:
  static DeformationSymbol zero();
  static DeformationSymbol indicator(double a, double b);
  static DeformationSymbol thinned(double gamma, double a, double b);
  /// Two-sided: 1 / (1 + exp(t|u| - s)). One-sided: 1 / (1 + exp(-t u - s)).
  static DeformationSymbol fermi(double t, double s, bool two_sided);
  /// 1 - exp(-f(u)) with f >= 0 vanishing outside [lo, hi].
  static DeformationSymbol one_minus_exp(std::function<double(double)> f, double lo,
                                         double hi, std::string label = "f");

  /// "zero", "indicator:a,b", "thinned:gamma,a,b", "fermi:t,s",
  /// "one-minus-exp:<expr in x>,lo,hi". `edge` picks the one-sided Fermi.
  static DeformationSymbol parse(const std::string& spec, bool edge);

  double operator()(double u) const;
  DeformationSymbol scaled(double lambda) const;

  SymbolFamily family() const noexcept { return family_; }
  std::string describe() const;
  /// Jump locations (interval families), in u.
  std::vector<double> breakpoints() const;
  /// Smallest interval outside which sigma < tol (may be infinite).
  std::pair<double, double> effective_support(double tol = 1e-14) const;
  bool is_zero() const noexcept { return family_ == SymbolFamily::Zero; }

 private:
  SymbolFamily family_ = SymbolFamily::Zero;
  double gamma_ = 1.0, a_ = 0.0, b_ = 0.0;
  double t_ = 1.0, s_ = 0.0;
  bool two_sided_ = true;
  std::function<double(double)> f_;
  std::string label_;
  double lambda_ = 1.0;
};

/// sigma_n(u) = sigma(n^t u), i.e. 1 - sigma_n(u) = exp(-f(n^t u)).
DeformationSymbol make_sigma_n(const DeformationSymbol& sigma, double n, double t);

/// Observable h: R -> [0, 1) with bounded support [lo, hi].
struct TestFunction {
  std::string name;
  std::function<double(double)> h;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breakpoints;
  bool outside_hypotheses = false;  // discontinuous h

  double operator()(double u) const { return h(u); }

  static TestFunction zero();
  /// hmax (1 - ((2u - a - b)/(b - a))^2)^3 on (a, b): a C^2 bump.
  static TestFunction bump(double hmax, double a, double b);
  /// height on (a, b), with linear ramps of width `ramp` centred on a and b.
  /// ramp = 0 gives the hard indicator and needs `allow_discontinuous`.
  static TestFunction soft_indicator(double height, double a, double b, double ramp,
                                     bool allow_discontinuous = false);
  /// "zero", "bump:hmax,a,b", "indicator:height,a,b,ramp".
  static TestFunction parse(const std::string& spec, bool allow_discontinuous);
};

}  // namespace deform
