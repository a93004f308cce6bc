#include "deform/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "deform/errors.hpp"

namespace deform {

namespace {

using quad = __float128;

constexpr quad parse_quad(const char* s) {
  quad v = 0;
  quad scale = 1;
  bool frac = false;
  for (; *s; ++s) {
    if (*s == '.') {
      frac = true;
      continue;
    }
    const int d = *s - '0';
    if (frac) {
      scale /= 10;
      v += scale * d;
    } else {
      v = v * 10 + d;
    }
  }
  return v;
}

// Ai(0) and -Ai'(0).
constexpr quad kC1 =
    parse_quad("0.35502805388781723926006318600418317639797917419917724");
constexpr quad kC2 =
    parse_quad("0.25881940379280679840518356018920396347909113835493458");

constexpr double kSeriesCutoff = 6.0;
constexpr int kWenigerOrder = 16;

// u_k of the Airy asymptotic expansion; v_k = -(6k+1)/(6k-1) u_k.
constexpr int kTerms = 2 * kWenigerOrder + 4;

struct AsymptoticCoefficients {
  std::array<long double, kTerms> u{};
  std::array<long double, kTerms> v{};
  AsymptoticCoefficients() {
    u[0] = 1.0L;
    v[0] = 1.0L;
    for (int k = 1; k < kTerms; ++k) {
      u[k] = u[k - 1] * (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) /
             (216.0L * (2 * k - 1) * k);
      v[k] = -(6.0L * k + 1) / (6.0L * k - 1) * u[k];
    }
  }
};

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c;
  return c;
}

// Weniger delta transform delta_k^{(0)} of the series sum a_j,
// with remainder estimates omega_j = a_{j+1}. Needs a[0..k+1].
long double weniger(const long double* a, int k) {
  std::array<long double, kTerms> s{};
  long double acc = 0.0L;
  for (int j = 0; j <= k + 1; ++j) {
    acc += a[j];
    s[j] = acc;
  }
  long double num = 0.0L;
  long double den = 0.0L;
  long double binom = 1.0L;
  for (int j = 0; j <= k; ++j) {
    // (j+1)_{k-1} / (k+1)_{k-1}
    long double ratio = 1.0L;
    for (int i = 0; i < k - 1; ++i) ratio *= (j + 1.0L + i) / (k + 1.0L + i);
    const long double c = ((j % 2) ? -binom : binom) * ratio / a[j + 1];
    num += c * s[j];
    den += c;
    binom = binom * (k - j) / (j + 1);
  }
  return num / den;
}

}  // namespace

AiryValue airy_ai_series(double xd) {
  if (!std::isfinite(xd)) throw ParameterError("airy_ai: non-finite argument");
  const quad x = xd;
  const quad x3 = x * x * x;
  // f = sum x^{3k}/prod(3j-1)(3j), g = sum x^{3k+1}/prod(3j)(3j+1)
  quad t = 1, f = 1;
  quad s = x, g = x;
  quad d = x * x / 2, fp = d;  // f'
  quad e = 1, gp = 1;          // g'
  const quad eps = 1e-36;
  for (int k = 1; k < 200; ++k) {
    t *= x3 / quad((3 * k - 1) * (3 * k));
    s *= x3 / quad((3 * k) * (3 * k + 1));
    e *= x3 / quad((3 * k) * (3 * k - 2));
    if (k > 1) d *= x3 / quad((3 * k - 1) * (3 * k - 3));
    f += t;
    g += s;
    gp += e;
    if (k > 1) fp += d;
    const quad mag = (t < 0 ? -t : t) + (s < 0 ? -s : s) + (e < 0 ? -e : e);
    if (k > 3 && mag < eps * (1 + (f < 0 ? -f : f) + (g < 0 ? -g : g)))
      break;
  }
  AiryValue out;
  out.argument = xd;
  out.ai = static_cast<double>(kC1 * f - kC2 * g);
  out.ai_prime = static_cast<double>(kC1 * fp - kC2 * gp);
  return out;
}

AiryValue airy_ai_asymptotic(double x) {
  if (!std::isfinite(x)) throw ParameterError("airy_ai: non-finite argument");
  const auto& c = coefficients();
  const long double z = std::abs(static_cast<long double>(x));
  const long double zeta = 2.0L / 3.0L * z * std::sqrt(z);
  const long double z14 = std::sqrt(std::sqrt(z));
  const long double rsqpi = 1.0L / std::sqrt(std::numbers::pi_v<long double>);
  const int k = kWenigerOrder;
  std::array<long double, kTerms> a{}, b{};
  AiryValue out;
  out.argument = x;
  if (x > 0) {
    long double p = 1.0L;
    for (int j = 0; j <= k + 1; ++j) {
      a[j] = ((j % 2) ? -1.0L : 1.0L) * c.u[j] * p;
      b[j] = ((j % 2) ? -1.0L : 1.0L) * c.v[j] * p;
      p /= zeta;
    }
    const long double pref = std::exp(-zeta) * rsqpi / 2.0L;
    out.ai = static_cast<double>(pref / z14 * weniger(a.data(), k));
    out.ai_prime = static_cast<double>(-pref * z14 * weniger(b.data(), k));
    return out;
  }
  // Oscillatory side: even and odd parts resummed separately.
  std::array<long double, kTerms> ue{}, uo{}, ve{}, vo{};
  long double p = 1.0L;
  for (int j = 0; j <= k + 1; ++j) {
    const long double sg = (j % 2) ? -1.0L : 1.0L;
    ue[j] = sg * c.u[2 * j] * p;
    ve[j] = sg * c.v[2 * j] * p;
    p /= zeta;
    uo[j] = sg * c.u[2 * j + 1] * p;
    vo[j] = sg * c.v[2 * j + 1] * p;
    p /= zeta;
  }
  const long double th = zeta - std::numbers::pi_v<long double> / 4.0L;
  const long double cs = std::cos(th);
  const long double sn = std::sin(th);
  out.ai = static_cast<double>(
      rsqpi / z14 * (cs * weniger(ue.data(), k) + sn * weniger(uo.data(), k)));
  out.ai_prime = static_cast<double>(
      rsqpi * z14 * (sn * weniger(ve.data(), k) - cs * weniger(vo.data(), k)));
  return out;
}

AiryValue airy_ai(double x) {
  if (!std::isfinite(x)) throw ParameterError("airy_ai: non-finite argument");
  if (x < -1000.0 || x > 100.0)
    throw OutOfRangeError("airy_ai: argument outside validated range [-1000, 100]");
  if (std::abs(x) <= kSeriesCutoff) return airy_ai_series(x);
  return airy_ai_asymptotic(x);
}

double airy_kernel(const AiryValue& a, const AiryValue& b) {
  const double u = a.argument;
  const double v = b.argument;
  const double d = u - v;
  if (std::abs(d) < 1e-3) {
    if (d == 0.0) return a.ai_prime * a.ai_prime - u * a.ai * a.ai;
    return airy_kernel(u, v);
  }
  return (a.ai * b.ai_prime - b.ai * a.ai_prime) / d;
}

double airy_kernel(double u, double v) {
  const double d = u - v;
  if (std::abs(d) < 1e-3) {
    // Even Taylor expansion about the midpoint in delta = (u - v) / 2.
    const double m = 0.5 * (u + v);
    const AiryValue c = airy_ai(m);
    const double A = c.ai;
    const double B = c.ai_prime;
    const double diag = B * B - m * A * A;
    const double delta = 0.5 * d;
    return diag + delta * delta * (A * B / 3.0 + 2.0 / 3.0 * m * diag);
  }
  const AiryValue a = airy_ai(u);
  const AiryValue b = airy_ai(v);
  return (a.ai * b.ai_prime - b.ai * a.ai_prime) / d;
}

double sine_kernel(double u, double v) {
  const double x = std::numbers::pi * (u - v);
  if (std::abs(x) < 1e-5) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double discrete_sine_kernel(double u, double v, double beta, double kappa,
                            double rho_star) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ParameterError("discrete_sine_kernel: need 0 < beta < 1");
  if (!(kappa > 0.0)) throw ParameterError("discrete_sine_kernel: kappa must be > 0");
  if (!(rho_star > 0.0))
    throw ParameterError("discrete_sine_kernel: rho_star must be > 0");
  return beta * kappa / rho_star * sine_kernel(beta * u, beta * v);
}

}  // namespace deform
