#pragma once

namespace deform {

struct AiryValue {
  double ai = 0.0;
  double ai_prime = 0.0;
  double argument = 0.0;
};

/// Ai and Ai' at x. Maclaurin series (quad precision) for |x| <= 6,
/// resummed asymptotic expansions beyond. Throws OutOfRangeError for
/// x < -1000 or x > 100.
AiryValue airy_ai(double x);

/// Maclaurin branch only, usable anywhere |x| <= 8 (for overlap checks).
AiryValue airy_ai_series(double x);

/// Asymptotic branch only, usable for |x| >= 4 (for overlap checks).
AiryValue airy_ai_asymptotic(double x);

/// (Ai(u)Ai'(v) - Ai(v)Ai'(u)) / (u - v), with the analytic diagonal.
double airy_kernel(double u, double v);

/// Same as airy_kernel, but from precomputed Airy values.
double airy_kernel(const AiryValue& a, const AiryValue& b);

/// sin(pi d) / (pi d), d = u - v.
double sine_kernel(double u, double v);

/// Discrete sine kernel on the lattice (kappa / rho) Z with occupation
/// beta kappa / rho:  (beta kappa / rho) sinc(beta (u - v)).
double discrete_sine_kernel(double u, double v, double beta, double kappa,
                            double rho_star);

}  // namespace deform
